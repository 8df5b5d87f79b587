#include "rpet/synthetic.hpp"

#include <cmath>
#include <random>

#include "rpet/error.hpp"

namespace rpet {

void SyntheticModel::validate() const {
    if (!(youngs_modulus > 0.0)) throw DomainError("synthetic model: E must be positive");
    if (!(yield_stress > 0.0) || !(yield_strain > 0.0))
        throw DomainError("synthetic model: yield point must be positive");
    if (!(fracture_strain > yield_strain)) throw DomainError("synthetic model: fracture strain must exceed yield strain");
    if (!(noise_std >= 0.0)) throw DomainError("synthetic model: noise must be non-negative");
    if (!(softening_slope <= 0.0)) throw DomainError("synthetic model: softening slope must be <= 0");
    if (!(fracture_stress() > 0.0)) throw DomainError("synthetic model: softening reaches zero stress before fracture");

    const double tol = 1e-12 * yield_strain;
    const double gap = toe_gap();
    if (gap < -tol) throw DomainError("synthetic model: yield_stress / E exceeds yield_strain");
    if (!(toe_strain >= 0.0 && toe_strain < yield_strain))
        throw DomainError("synthetic model: toe must end before yield");
    if (toe_strain < gap - tol) throw DomainError("synthetic model: toe too short to close the strain gap");
    if (toe_strain > 2.0 * gap + tol) throw DomainError("synthetic model: toe steeper than E at its end");
}

double model_stress(const SyntheticModel& m, double strain) {
    if (strain > m.yield_strain) return m.yield_stress + m.softening_slope * (strain - m.yield_strain);
    if (strain >= m.toe_strain) return m.yield_stress - m.youngs_modulus * (m.yield_strain - strain);
    const double toe_end = std::max(0.0, m.yield_stress - m.youngs_modulus * (m.yield_strain - m.toe_strain));
    const double r = strain / m.toe_strain;
    return toe_end * r * r;
}

RawTestRecord generate_synthetic_record(const SyntheticModel& model, const SpecimenGeometry& geometry,
                                        std::size_t n_samples, PrintConfig config, std::string label) {
    if (n_samples < 50) throw DomainError("synthetic records need at least 50 samples");
    model.validate();
    geometry.validate();

    std::mt19937_64 rng(model.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    const double area = geometry.area();

    RawTestRecord r;
    r.geometry = geometry;
    r.config = config;
    r.label = std::move(label);
    r.end = EndCondition::MachineStop;
    r.samples.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double eps = model.fracture_strain * static_cast<double>(i) / static_cast<double>(n_samples - 1);
        double sigma = model_stress(model, eps);
        if (model.noise_std > 0.0) sigma += model.noise_std * noise(rng);
        r.samples.push_back({eps * geometry.height, sigma * area});
    }
    return r;
}

SyntheticModel model_from_targets(const PropertyTargets& t, double noise_std, std::uint64_t seed) {
    SyntheticModel m;
    m.youngs_modulus = t.youngs_modulus;
    m.yield_stress = t.yield_stress;
    m.yield_strain = t.yield_strain;
    m.fracture_strain = t.fracture_strain;
    m.noise_std = noise_std;
    m.seed = seed;

    const double gap = std::max(0.0, m.toe_gap());
    m.toe_strain = std::min(2.0 * gap, gap + 0.1 * (t.yield_strain - gap));

    const double end_stress =
        t.fracture_stress < t.yield_stress ? t.fracture_stress : 2.0 * t.yield_stress - t.fracture_stress;
    m.softening_slope = (end_stress - t.yield_stress) / (t.fracture_strain - t.yield_strain);
    m.validate();
    return m;
}

}  // namespace rpet
