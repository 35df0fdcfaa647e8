#include "eprsim/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace eprsim {

namespace {

using json = nlohmann::ordered_json;

double to_degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

json estimate_json(const CorrelationEstimate& e) {
    json j;
    j["estimate"] = e.estimate;
    j["stderr"] = e.stderr_;
    j["trials"] = e.trials;
    if (e.exact.has_value()) j["exact"] = *e.exact;
    return j;
}

json counts_json(const JointCounts& c) {
    json j;
    j["pp"] = c.pp;
    j["pm"] = c.pm;
    j["mp"] = c.mp;
    j["mm"] = c.mm;
    return j;
}

std::string wrap(const json& payload, const ConfigEcho& config) {
    json root;
    root["schema_version"] = kSchemaVersion;
    root["config"] = config;
    for (const auto& [key, value] : payload.items()) root[key] = value;
    return root.dump(2) + "\n";
}

// key,value CSV for the scalar reports.
class KvCsv {
  public:
    KvCsv() { out_ << "key,value\n"; }
    void add(std::string_view key, const std::string& value) {
        out_ << key << ',' << value << '\n';
    }
    void add(std::string_view key, double value) { add(key, fmt6(value)); }
    void add(std::string_view key, std::uint64_t value) {
        add(key, std::to_string(value));
    }
    void add(std::string_view key, long long value) {
        add(key, std::to_string(value));
    }
    void add(std::string_view key, bool value) {
        add(key, std::string(value ? "true" : "false"));
    }
    std::string str() const { return out_.str(); }

  private:
    std::ostringstream out_;
};

void estimate_lines(std::ostringstream& out, std::string_view name,
                    const CorrelationEstimate& e) {
    out << name << ": " << fmt6(e.estimate) << " +/- " << fmt6(e.stderr_);
    if (e.exact.has_value()) out << "  (exact " << fmt6(*e.exact) << ")";
    out << '\n';
}

}  // namespace

std::string_view format_name(OutputFormat f) {
    switch (f) {
        case OutputFormat::Table: return "table";
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Json: return "json";
    }
    return "unknown";
}

OutputFormat parse_format(std::string_view name) {
    if (name == "table") return OutputFormat::Table;
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw std::invalid_argument("unknown format: " + std::string(name));
}

std::string fmt6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

std::string render_inequality(const InequalityReport& r, OutputFormat format,
                              const ConfigEcho& config) {
    switch (format) {
        case OutputFormat::Json: {
            json j;
            j["experiment"] = "inequality";
            j["trials"] = r.trials;
            j["counts"] = counts_json(r.counts);
            j["alice_plus"] = r.alice_plus;
            j["alice_minus"] = r.alice_minus;
            j["q_plus_minus"] = r.q_plus_minus;
            j["q_symmetric"] = r.q_symmetric;
            j["q_fraction"] = r.q_fraction;
            j["required_q_fraction"] = r.required_q_fraction;
            j["paper_bound"] = r.paper_bound;
            j["alice_flips"] = r.alice_flips;
            j["bob_flips"] = r.bob_flips;
            j["alice_flip_rate"] = r.alice_flip_rate;
            j["bob_flip_rate"] = r.bob_flip_rate;
            j["sum_of_products"] = r.sum_of_products;
            j["identity_value"] = r.identity_value;
            j["identity_holds"] = r.identity_holds;
            j["local"] = estimate_json(r.local);
            j["quantum"] = estimate_json(r.quantum);
            j["local_model_exact"] = r.local_model_exact;
            j["quantum_expected"] = r.quantum_expected;
            j["z_score"] = r.z_score;
            j["p_value"] = r.p_value;
            j["local_model_excluded"] = r.local_model_excluded;
            return wrap(j, config);
        }
        case OutputFormat::Csv: {
            KvCsv csv;
            csv.add("trials", r.trials);
            csv.add("count_pp", r.counts.pp);
            csv.add("count_pm", r.counts.pm);
            csv.add("count_mp", r.counts.mp);
            csv.add("count_mm", r.counts.mm);
            csv.add("alice_plus", r.alice_plus);
            csv.add("alice_minus", r.alice_minus);
            csv.add("q_plus_minus", r.q_plus_minus);
            csv.add("q_symmetric", r.q_symmetric);
            csv.add("q_fraction", r.q_fraction);
            csv.add("required_q_fraction", r.required_q_fraction);
            csv.add("paper_bound", r.paper_bound);
            csv.add("alice_flip_rate", r.alice_flip_rate);
            csv.add("bob_flip_rate", r.bob_flip_rate);
            csv.add("sum_of_products", r.sum_of_products);
            csv.add("identity_value", r.identity_value);
            csv.add("identity_holds", r.identity_holds);
            csv.add("local_estimate", r.local.estimate);
            csv.add("local_stderr", r.local.stderr_);
            csv.add("local_exact", r.local_model_exact);
            csv.add("quantum_estimate", r.quantum.estimate);
            csv.add("quantum_stderr", r.quantum.stderr_);
            csv.add("quantum_expected", r.quantum_expected);
            csv.add("z_score", r.z_score);
            csv.add("p_value", r.p_value);
            csv.add("local_model_excluded", r.local_model_excluded);
            return csv.str();
        }
        case OutputFormat::Table: {
            std::ostringstream out;
            out << "Inequality experiment: local definite-aligned pair at "
                   "orthogonal 45-degree settings\n";
            out << "trials: " << r.trials << '\n';
            out << "joint counts: ++ " << r.counts.pp << "  +- " << r.counts.pm
                << "  -+ " << r.counts.mp << "  -- " << r.counts.mm << '\n';
            out << "Alice: +" << r.alice_plus << " / -" << r.alice_minus
                << "  flip rate " << fmt6(r.alice_flip_rate) << '\n';
            out << "Bob flip rate: " << fmt6(r.bob_flip_rate) << '\n';
            out << "Q raw (+,-): " << r.q_plus_minus
                << "   Q symmetric: " << fmt6(r.q_symmetric)
                << "   q fraction: " << fmt6(r.q_fraction) << '\n';
            out << "zero correlation requires q fraction "
                << fmt6(r.required_q_fraction)
                << "; consecutive-measurement flip bound "
                << fmt6(r.paper_bound) << '\n';
            out << "identity check: sum of products " << r.sum_of_products
                << " vs P+N-4Q " << r.identity_value << " -> "
                << (r.identity_holds ? "exact" : "VIOLATED") << '\n';
            estimate_lines(out, "local correlation", r.local);
            estimate_lines(out, "quantum correlation", r.quantum);
            out << "z vs quantum expectation " << fmt6(r.quantum_expected)
                << ": " << fmt6(r.z_score) << "  (p = " << fmt6(r.p_value)
                << ")\n";
            out << (r.local_model_excluded
                        ? "PASS: local model statistically excluded\n"
                        : "FAIL: local model not excluded at p < 1e-6\n");
            return out.str();
        }
    }
    throw std::logic_error("render_inequality: unreachable");
}

std::string render_sweep(const SweepReport& r, OutputFormat format,
                         const ConfigEcho& config) {
    switch (format) {
        case OutputFormat::Csv: {
            std::ostringstream out;
            out << "angle_deg,estimate,stderr,exact,quantum_exact\n";
            for (const SweepRow& row : r.rows) {
                out << fmt6(to_degrees(row.angle)) << ',' << fmt6(row.estimate.estimate)
                    << ',' << fmt6(row.estimate.stderr_) << ','
                    << fmt6(row.model_exact) << ',' << fmt6(row.quantum_exact)
                    << '\n';
            }
            return out.str();
        }
        case OutputFormat::Json: {
            json rows = json::array();
            for (const SweepRow& row : r.rows) {
                json jr;
                jr["angle_deg"] = to_degrees(row.angle);
                jr["estimate"] = row.estimate.estimate;
                jr["stderr"] = row.estimate.stderr_;
                jr["exact"] = row.model_exact;
                jr["quantum_exact"] = row.quantum_exact;
                rows.push_back(jr);
            }
            json j;
            j["experiment"] = "sweep";
            j["model"] = std::string(model_name(r.model));
            j["trials_per_point"] = r.trials_per_point;
            j["rows"] = rows;
            return wrap(j, config);
        }
        case OutputFormat::Table: {
            std::ostringstream out;
            out << "Correlation sweep, model " << model_name(r.model) << ", "
                << r.trials_per_point << " trials per point\n";
            out << "angle_deg    estimate     stderr       exact        quantum\n";
            for (const SweepRow& row : r.rows) {
                out << fmt6(to_degrees(row.angle)) << "   " << fmt6(row.estimate.estimate)
                    << "    " << fmt6(row.estimate.stderr_) << "    "
                    << fmt6(row.model_exact) << "    " << fmt6(row.quantum_exact)
                    << '\n';
            }
            return out.str();
        }
    }
    throw std::logic_error("render_sweep: unreachable");
}

std::string render_frame(const FrameReport& r, OutputFormat format,
                         const ConfigEcho& config) {
    switch (format) {
        case OutputFormat::Json: {
            json j;
            j["experiment"] = "frame";
            j["trials"] = r.trials;
            j["alice_first_counts"] = counts_json(r.alice_first);
            j["bob_first_counts"] = counts_json(r.bob_first);
            j["max_cell_deviation"] = r.max_cell_deviation;
            j["cell_tolerance"] = r.cell_tolerance;
            j["cells_within_tolerance"] = r.cells_within_tolerance;
            j["history_divergence_rad"] = r.history_divergence;
            j["correlation_alice_first"] = estimate_json(r.correlation_alice_first);
            j["correlation_bob_first"] = estimate_json(r.correlation_bob_first);
            return wrap(j, config);
        }
        case OutputFormat::Csv: {
            KvCsv csv;
            csv.add("trials", r.trials);
            csv.add("af_pp", r.alice_first.pp);
            csv.add("af_pm", r.alice_first.pm);
            csv.add("af_mp", r.alice_first.mp);
            csv.add("af_mm", r.alice_first.mm);
            csv.add("bf_pp", r.bob_first.pp);
            csv.add("bf_pm", r.bob_first.pm);
            csv.add("bf_mp", r.bob_first.mp);
            csv.add("bf_mm", r.bob_first.mm);
            csv.add("max_cell_deviation", r.max_cell_deviation);
            csv.add("cell_tolerance", r.cell_tolerance);
            csv.add("cells_within_tolerance", r.cells_within_tolerance);
            csv.add("history_divergence_rad", r.history_divergence);
            csv.add("correlation_alice_first", r.correlation_alice_first.estimate);
            csv.add("correlation_bob_first", r.correlation_bob_first.estimate);
            return csv.str();
        }
        case OutputFormat::Table: {
            std::ostringstream out;
            out << "Frame-ordering comparison (nonlocal aligning model)\n";
            out << "trials: " << r.trials << '\n';
            out << "Alice-first counts: ++ " << r.alice_first.pp << "  +- "
                << r.alice_first.pm << "  -+ " << r.alice_first.mp << "  -- "
                << r.alice_first.mm << '\n';
            out << "Bob-first counts:   ++ " << r.bob_first.pp << "  +- "
                << r.bob_first.pm << "  -+ " << r.bob_first.mp << "  -- "
                << r.bob_first.mm << '\n';
            out << "max cell deviation " << fmt6(r.max_cell_deviation)
                << " (tolerance " << fmt6(r.cell_tolerance) << ") -> "
                << (r.cells_within_tolerance ? "PASS" : "FAIL") << '\n';
            estimate_lines(out, "correlation, Alice first", r.correlation_alice_first);
            estimate_lines(out, "correlation, Bob first", r.correlation_bob_first);
            out << "history divergence of Alice's pre-measurement spin: "
                << fmt6(r.history_divergence) << " rad\n";
            return out.str();
        }
    }
    throw std::logic_error("render_frame: unreachable");
}

std::string render_nonsignaling(const NonsignalingReport& r, OutputFormat format,
                                const ConfigEcho& config) {
    switch (format) {
        case OutputFormat::Json: {
            json j;
            j["experiment"] = "nonsignal";
            j["model"] = std::string(model_name(r.model));
            j["ordering"] = std::string(ordering_name(r.ordering));
            j["trials"] = r.trials;
            j["alice_plus_rate_b1"] = r.alice_plus_rate_b1;
            j["alice_plus_rate_b2"] = r.alice_plus_rate_b2;
            j["abs_difference"] = r.abs_difference;
            j["tolerance"] = r.tolerance;
            j["statistically_zero"] = r.statistically_zero;
            j["bitwise_identical"] = r.bitwise_identical;
            return wrap(j, config);
        }
        case OutputFormat::Csv: {
            KvCsv csv;
            csv.add("model", std::string(model_name(r.model)));
            csv.add("ordering", std::string(ordering_name(r.ordering)));
            csv.add("trials", r.trials);
            csv.add("alice_plus_rate_b1", r.alice_plus_rate_b1);
            csv.add("alice_plus_rate_b2", r.alice_plus_rate_b2);
            csv.add("abs_difference", r.abs_difference);
            csv.add("tolerance", r.tolerance);
            csv.add("statistically_zero", r.statistically_zero);
            csv.add("bitwise_identical", r.bitwise_identical);
            return csv.str();
        }
        case OutputFormat::Table: {
            std::ostringstream out;
            out << "Non-signaling check, model " << model_name(r.model)
                << ", ordering " << ordering_name(r.ordering) << '\n';
            out << "trials: " << r.trials << '\n';
            out << "Alice P(+) under b1: " << fmt6(r.alice_plus_rate_b1)
                << "   under b2: " << fmt6(r.alice_plus_rate_b2) << '\n';
            out << "|difference| " << fmt6(r.abs_difference) << " vs tolerance "
                << fmt6(r.tolerance) << " -> "
                << (r.statistically_zero ? "PASS" : "FAIL") << '\n';
            out << "per-trial outcomes bitwise identical: "
                << (r.bitwise_identical ? "yes" : "no") << '\n';
            return out.str();
        }
    }
    throw std::logic_error("render_nonsignaling: unreachable");
}

std::string render_contrast(const ContrastReport& r, OutputFormat format,
                            const ConfigEcho& config) {
    switch (format) {
        case OutputFormat::Json: {
            json j;
            j["experiment"] = "contrast";
            j["trials"] = r.trials;
            j["mixture"] = estimate_json(r.mixture);
            j["singlet"] = estimate_json(r.singlet);
            return wrap(j, config);
        }
        case OutputFormat::Csv: {
            KvCsv csv;
            csv.add("trials", r.trials);
            csv.add("mixture_estimate", r.mixture.estimate);
            csv.add("mixture_stderr", r.mixture.stderr_);
            csv.add("mixture_exact", r.mixture.exact.value_or(0.0));
            csv.add("singlet_estimate", r.singlet.estimate);
            csv.add("singlet_stderr", r.singlet.stderr_);
            csv.add("singlet_exact", r.singlet.exact.value_or(0.0));
            return csv.str();
        }
        case OutputFormat::Table: {
            std::ostringstream out;
            out << "Superposition contrast: singlet vs 50/50 definite mixture\n";
            out << "trials: " << r.trials << '\n';
            estimate_lines(out, "mixture correlation", r.mixture);
            estimate_lines(out, "singlet correlation", r.singlet);
            return out.str();
        }
    }
    throw std::logic_error("render_contrast: unreachable");
}

std::string render_kink(ModelKind model, double epsilon, double slope,
                        double quantum_slope, OutputFormat format,
                        const ConfigEcho& config) {
    switch (format) {
        case OutputFormat::Json: {
            json j;
            j["experiment"] = "kink";
            j["model"] = std::string(model_name(model));
            j["epsilon_rad"] = epsilon;
            j["slope"] = slope;
            j["quantum_slope"] = quantum_slope;
            return wrap(j, config);
        }
        case OutputFormat::Csv: {
            KvCsv csv;
            csv.add("model", std::string(model_name(model)));
            csv.add("epsilon_rad", epsilon);
            csv.add("slope", slope);
            csv.add("quantum_slope", quantum_slope);
            return csv.str();
        }
        case OutputFormat::Table: {
            std::ostringstream out;
            out << "Kink slope at aligned settings, model " << model_name(model)
                << '\n';
            out << "epsilon: " << fmt6(epsilon) << " rad\n";
            out << "slope: " << fmt6(slope) << "   (quantum reference "
                << fmt6(quantum_slope) << ")\n";
            return out.str();
        }
    }
    throw std::logic_error("render_kink: unreachable");
}

}  // namespace eprsim
