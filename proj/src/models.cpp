#include "eprsim/models.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace eprsim {

namespace {

// sign(0) resolves to +1 (measure-zero tie set).
int sign01(double x) { return x < 0.0 ? -1 : +1; }

Outcome outcome_from_sign(int s) {
    return s >= 0 ? Outcome::Plus : Outcome::Minus;
}

constexpr HistoryEvent premeasure_event(Station s) {
    return s == Station::Alice ? HistoryEvent::AlicePremeasure
                               : HistoryEvent::BobPremeasure;
}
constexpr HistoryEvent collapse_event(Station s) {
    return s == Station::Alice ? HistoryEvent::AliceCollapse
                               : HistoryEvent::BobCollapse;
}
constexpr HistoryEvent realign_event(Station s) {
    return s == Station::Alice ? HistoryEvent::AliceRealign
                               : HistoryEvent::BobRealign;
}

Direction& station_spin(SpinAssignment& spins, Station s) {
    return s == Station::Alice ? spins.alice_spin : spins.bob_spin;
}

// Station-local projective measurement: sees its own hidden spin and its
// own setting, nothing else. Collapses the spin and records two snapshots.
Outcome measure_local_station(HiddenState& state, Station station,
                              const Direction& setting, RandomStream& rng) {
    Direction& spin = station_spin(*state.spins, station);
    state.history.push_back({premeasure_event(station), spin});
    const SequentialResult result = sequential_sample(spin, setting, rng);
    spin = result.post_spin;
    state.history.push_back({collapse_event(station), spin});
    return result.outcome;
}

void require_prepared(const ModelSpec& spec, const HiddenState& state) {
    if (!state.model_tag.has_value()) {
        throw std::invalid_argument("measure_pair: state was not prepared");
    }
    if (*state.model_tag != spec.kind) {
        throw std::invalid_argument(
            "measure_pair: state was prepared for a different model");
    }
    if (spec.kind != ModelKind::Quantum && !state.spins.has_value()) {
        throw std::invalid_argument("measure_pair: state is missing hidden spins");
    }
}

}  // namespace

std::string_view model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Quantum: return "quantum";
        case ModelKind::DefiniteAligned: return "definite";
        case ModelKind::IsotropicOpposite: return "isotropic";
        case ModelKind::NonlocalAligning: return "nonlocal";
        case ModelKind::DeterministicSign: return "sign";
    }
    return "unknown";
}

ModelKind parse_model(std::string_view name) {
    if (name == "quantum") return ModelKind::Quantum;
    if (name == "definite") return ModelKind::DefiniteAligned;
    if (name == "isotropic") return ModelKind::IsotropicOpposite;
    if (name == "nonlocal") return ModelKind::NonlocalAligning;
    if (name == "sign") return ModelKind::DeterministicSign;
    throw std::invalid_argument("unknown model: " + std::string(name));
}

std::string_view assignment_name(Assignment a) {
    return a == Assignment::PlusMinus ? "+-" : "-+";
}

Assignment parse_assignment(std::string_view name) {
    if (name == "+-") return Assignment::PlusMinus;
    if (name == "-+") return Assignment::MinusPlus;
    throw std::invalid_argument("unknown assignment: " + std::string(name));
}

std::string_view ordering_name(Ordering o) {
    return o == Ordering::AliceFirst ? "alice-first" : "bob-first";
}

Ordering parse_ordering(std::string_view name) {
    if (name == "alice-first") return Ordering::AliceFirst;
    if (name == "bob-first") return Ordering::BobFirst;
    throw std::invalid_argument("unknown ordering: " + std::string(name));
}

std::string_view history_event_name(HistoryEvent e) {
    switch (e) {
        case HistoryEvent::PrepareAlice: return "prepare_alice";
        case HistoryEvent::PrepareBob: return "prepare_bob";
        case HistoryEvent::AlicePremeasure: return "alice_premeasure";
        case HistoryEvent::BobPremeasure: return "bob_premeasure";
        case HistoryEvent::AliceCollapse: return "alice_collapse";
        case HistoryEvent::BobCollapse: return "bob_collapse";
        case HistoryEvent::AliceRealign: return "alice_realign";
        case HistoryEvent::BobRealign: return "bob_realign";
    }
    return "unknown";
}

ModelSpec ModelSpec::quantum() { return {ModelKind::Quantum, std::nullopt, {}}; }

ModelSpec ModelSpec::definite_aligned(const Direction& axis,
                                      Assignment assignment) {
    return {ModelKind::DefiniteAligned, axis, assignment};
}

ModelSpec ModelSpec::isotropic_opposite() {
    return {ModelKind::IsotropicOpposite, std::nullopt, {}};
}

ModelSpec ModelSpec::nonlocal_aligning() {
    return {ModelKind::NonlocalAligning, std::nullopt, {}};
}

ModelSpec ModelSpec::deterministic_sign() {
    return {ModelKind::DeterministicSign, std::nullopt, {}};
}

MeasurementContext measurement_context(const ModelSpec& spec, Station station,
                                       Ordering ordering) {
    return {station, ordering, spec.kind == ModelKind::NonlocalAligning};
}

HiddenState prepare(const ModelSpec& spec, RandomStream& rng) {
    HiddenState state;
    state.model_tag = spec.kind;
    switch (spec.kind) {
        case ModelKind::Quantum:
            // Sentinel: no hidden spins, nothing to snapshot.
            return state;
        case ModelKind::DefiniteAligned: {
            if (!spec.axis.has_value()) {
                throw std::invalid_argument(
                    "prepare: DefiniteAligned requires an axis");
            }
            const Direction axis = *spec.axis;
            state.spins = spec.assignment == Assignment::PlusMinus
                              ? SpinAssignment{axis, axis.negated()}
                              : SpinAssignment{axis.negated(), axis};
            break;
        }
        case ModelKind::IsotropicOpposite:
        case ModelKind::NonlocalAligning:
        case ModelKind::DeterministicSign: {
            const Direction lambda = random_unit_vector(rng);
            state.spins = SpinAssignment{lambda, lambda.negated()};
            break;
        }
    }
    state.history.reserve(8);
    state.history.push_back({HistoryEvent::PrepareAlice, state.spins->alice_spin});
    state.history.push_back({HistoryEvent::PrepareBob, state.spins->bob_spin});
    return state;
}

PairOutcomes measure_pair(const ModelSpec& spec, HiddenState& state,
                          const Direction& a, const Direction& b,
                          Ordering ordering, RandomStream& rng) {
    require_prepared(spec, state);
    switch (spec.kind) {
        case ModelKind::Quantum:
            return sample_singlet(a, b, rng);

        case ModelKind::DefiniteAligned:
        case ModelKind::IsotropicOpposite: {
            // Fixed draw order (Alice, then Bob) regardless of `ordering`:
            // each station's draw position depends only on its own data, so
            // neither outcome can depend on the remote setting, bit for bit.
            const Outcome alice = measure_local_station(state, Station::Alice, a, rng);
            const Outcome bob = measure_local_station(state, Station::Bob, b, rng);
            return {alice, bob};
        }

        case ModelKind::NonlocalAligning: {
            const Station first =
                ordering == Ordering::AliceFirst ? Station::Alice : Station::Bob;
            const Station second =
                ordering == Ordering::AliceFirst ? Station::Bob : Station::Alice;
            const Direction& first_setting = first == Station::Alice ? a : b;
            const Direction& second_setting = second == Station::Alice ? a : b;

            const Outcome first_outcome =
                measure_local_station(state, first, first_setting, rng);
            // Instantaneous realignment: the remote spin snaps anti-parallel
            // to the first station's collapsed direction, so an equal-setting
            // second measurement is certain to give the opposite outcome.
            const Direction collapsed = station_spin(*state.spins, first);
            station_spin(*state.spins, second) = collapsed.negated();
            state.history.push_back(
                {realign_event(second), station_spin(*state.spins, second)});
            const Outcome second_outcome =
                measure_local_station(state, second, second_setting, rng);

            return first == Station::Alice
                       ? PairOutcomes{first_outcome, second_outcome}
                       : PairOutcomes{second_outcome, first_outcome};
        }

        case ModelKind::DeterministicSign: {
            const Direction& lambda = state.spins->alice_spin;
            state.history.push_back(
                {HistoryEvent::AlicePremeasure, state.spins->alice_spin});
            state.history.push_back(
                {HistoryEvent::BobPremeasure, state.spins->bob_spin});
            const Outcome alice = outcome_from_sign(sign01(a.dot(lambda)));
            const Outcome bob = outcome_from_sign(-sign01(b.dot(lambda)));
            return {alice, bob};
        }
    }
    throw std::logic_error("measure_pair: unreachable");
}

double exact_correlation(const ModelSpec& spec, const Direction& a,
                         const Direction& b) {
    switch (spec.kind) {
        case ModelKind::Quantum:
        case ModelKind::NonlocalAligning:
            return singlet_correlation_exact(a, b);
        case ModelKind::DefiniteAligned: {
            if (!spec.axis.has_value()) {
                throw std::invalid_argument(
                    "exact_correlation: DefiniteAligned requires an axis");
            }
            // Independent stations: product of the per-station expectations;
            // the same value for either assignment.
            return -(a.dot(*spec.axis)) * (b.dot(*spec.axis));
        }
        case ModelKind::IsotropicOpposite:
            return -a.dot(b) / 3.0;
        case ModelKind::DeterministicSign:
            return -1.0 + 2.0 * angle_between(a, b) / std::numbers::pi;
    }
    throw std::logic_error("exact_correlation: unreachable");
}

}  // namespace eprsim
