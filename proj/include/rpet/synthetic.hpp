#pragma once

// Synthetic compression records with known properties: a hardening
// quadratic toe, a linear elastic stretch up to the yield peak and a linear
// softening branch that ends at fracture.  Used as a round-trip oracle for
// the extraction pipeline.

#include <cstdint>

#include "rpet/curve.hpp"

namespace rpet {

struct SyntheticModel {
    double youngs_modulus = 0.0;   // MPa
    double yield_stress = 0.0;     // MPa
    double yield_strain = 0.0;     // mm/mm
    double softening_slope = 0.0;  // MPa per unit strain, <= 0
    double fracture_strain = 0.0;  // mm/mm
    double toe_strain = 0.0;       // mm/mm
    double noise_std = 0.0;        // MPa
    std::uint64_t seed = 0;

    /// Strain offset of the elastic line: yield_strain - yield_stress / E.
    double toe_gap() const noexcept { return yield_strain - yield_stress / youngs_modulus; }
    double fracture_stress() const noexcept {
        return yield_stress + softening_slope * (fracture_strain - yield_strain);
    }

    /// DomainError unless E > 0, fracture_strain > yield_strain, noise >= 0,
    /// softening <= 0, and the toe closes the gap between yield_stress / E
    /// and yield_strain with a slope that never exceeds E.
    void validate() const;
};

/// Noise-free stress of the model at `strain`.
double model_stress(const SyntheticModel& model, double strain);

/// Uniform strain grid over [0, fracture_strain], converted to force and
/// displacement through the specimen geometry, Gaussian stress noise added.
/// Deterministic for a fixed seed; the record ends by machine stop.
RawTestRecord generate_synthetic_record(const SyntheticModel& model, const SpecimenGeometry& geometry,
                                        std::size_t n_samples, PrintConfig config = {},
                                        std::string label = "synthetic");

/// Published-style property targets for building a model.
struct PropertyTargets {
    double youngs_modulus = 0.0;
    double yield_stress = 0.0;
    double fracture_stress = 0.0;
    double yield_strain = 0.0;
    double fracture_strain = 0.0;
};

/// Model hitting E, yield point and fracture strain exactly.  The toe spans
/// min(2 gap, gap + 0.1 (eps_y - gap)); softening ends at the target
/// fracture stress when it lies below yield, otherwise at its mirror image
/// 2 sigma_y - sigma_f (the model cannot harden after yield).
SyntheticModel model_from_targets(const PropertyTargets& t, double noise_std = 0.0, std::uint64_t seed = 0);

}  // namespace rpet
