#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "eprsim/spin_core.hpp"
#include "eprsim/stats.hpp"

namespace eprsim {

enum class ModelKind {
    Quantum,            // exact singlet sampling, no hidden spins
    DefiniteAligned,    // definite anti-aligned spins on a fixed axis
    IsotropicOpposite,  // anti-aligned pair, axis uniform on the sphere
    NonlocalAligning,   // first measurement realigns the remote spin
    DeterministicSign,  // outcome = sign of setting against shared axis
};

/// Which station's pre-measurement values were +/-: PlusMinus is Alice +,
/// Bob -.
enum class Assignment { PlusMinus, MinusPlus };

enum class Station { Alice, Bob };
enum class Ordering { AliceFirst, BobFirst };

std::string_view model_name(ModelKind kind);
ModelKind parse_model(std::string_view name);
std::string_view assignment_name(Assignment a);
Assignment parse_assignment(std::string_view name);
std::string_view ordering_name(Ordering o);
Ordering parse_ordering(std::string_view name);

/// Immutable description of a pair-measurement model. Use the factories;
/// kind-specific parameters are validated there.
struct ModelSpec {
    ModelKind kind = ModelKind::Quantum;
    std::optional<Direction> axis;  // DefiniteAligned only
    Assignment assignment = Assignment::PlusMinus;

    static ModelSpec quantum();
    static ModelSpec definite_aligned(const Direction& axis, Assignment assignment);
    static ModelSpec isotropic_opposite();
    static ModelSpec nonlocal_aligning();
    static ModelSpec deterministic_sign();
};

enum class HistoryEvent {
    PrepareAlice,
    PrepareBob,
    AlicePremeasure,
    BobPremeasure,
    AliceCollapse,
    BobCollapse,
    AliceRealign,
    BobRealign,
};

std::string_view history_event_name(HistoryEvent e);

struct HistorySnapshot {
    HistoryEvent event;
    Direction spin;
};

/// Per-trial hidden variables for one particle pair. `spins` is empty for
/// the quantum sentinel. The history is append-only: preparation snapshots
/// first, then one snapshot per mutation or measurement.
struct HiddenState {
    std::optional<ModelKind> model_tag;
    std::optional<SpinAssignment> spins;
    std::vector<HistorySnapshot> history;
};

/// What a station is allowed to see during measurement.
/// remote_setting_visible is true only for parameter-dependent models;
/// local models measure against a redacted context.
struct MeasurementContext {
    Station station;
    Ordering ordering;
    bool remote_setting_visible;
};

MeasurementContext measurement_context(const ModelSpec& spec, Station station,
                                       Ordering ordering);

/// Draws the per-trial hidden state. DefiniteAligned consumes no draws;
/// the sphere-sampled models consume exactly two.
HiddenState prepare(const ModelSpec& spec, RandomStream& rng);

/// Measures the pair at settings (a, b). Local models measure each station
/// against its own hidden spin only and never read the remote setting;
/// NonlocalAligning realigns the remote spin anti-parallel to the first
/// station's collapsed direction before the second measurement. Mutations
/// and measurements append history snapshots (the quantum sentinel leaves
/// history untouched). Throws if `state` was not prepared for `spec`.
PairOutcomes measure_pair(const ModelSpec& spec, HiddenState& state,
                          const Direction& a, const Direction& b,
                          Ordering ordering, RandomStream& rng);

/// Closed-form correlation of the model at settings (a, b):
///   Quantum / NonlocalAligning:  -a.b
///   DefiniteAligned(axis):       -(a.axis)(b.axis), either assignment
///   IsotropicOpposite:           -(a.b)/3
///   DeterministicSign:           -1 + 2*angle(a,b)/pi
double exact_correlation(const ModelSpec& spec, const Direction& a,
                         const Direction& b);

}  // namespace eprsim
