#include "rdmpurify/noise.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace rdmpurify {

namespace {

// Deterministic standard normal: Box-Muller over mt19937_64 output.  The
// engine is fully specified by the standard, so streams are bit-stable
// across platforms (std::normal_distribution is not).
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        double u2 = uniform();
        double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return mag * std::cos(2.0 * M_PI * u2);
    }

  private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace

TwoRDM apply_noise(const TwoRDM& d, const NoiseSpec& spec) {
    if (spec.shots < 1) throw std::invalid_argument("apply_noise: shots >= 1 required");
    if (spec.alpha <= 0.0) throw std::invalid_argument("apply_noise: alpha > 0 required");
    if (spec.model != "gaussian-element")
        throw std::invalid_argument("apply_noise: unknown noise model " + spec.model);

    double sigma = spec.alpha / std::sqrt(static_cast<double>(spec.shots));
    GaussianStream gauss(spec.seed);
    Eigen::MatrixXd m = d.packed();
    int p = d.packed_dim();
    for (int row = 0; row < p; ++row)
        for (int col = row; col < p; ++col) {
            double eps = sigma * gauss.next();
            m(row, col) += eps;
            if (col != row) m(col, row) += eps;
        }
    return TwoRDM(d.r(), d.particles(), std::move(m));
}

double calibrate_alpha(double target_energy_stderr, const ReducedHamiltonian& k,
                       const TwoRDM& d, long long shots) {
    if (target_energy_stderr <= 0.0)
        throw std::invalid_argument("calibrate_alpha: target must be positive");
    if (shots < 1) throw std::invalid_argument("calibrate_alpha: shots >= 1 required");
    if (k.r != d.r())
        throw std::invalid_argument("calibrate_alpha: K and D dimensions differ");

    // The full-index trace is 4x the packed elementwise sum, so a packed
    // perturbation eps shifts E by 4 sum_I K_II eps_II + 8 sum_{I<J} K_IJ
    // eps_IJ and stderr(E) = sigma * g with
    // g^2 = 16 sum_I K_II^2 + 64 sum_{I<J} K_IJ^2.
    int p = pair_count(k.r);
    double g2 = 0.0;
    for (int row = 0; row < p; ++row) {
        g2 += 16.0 * k.packed(row, row) * k.packed(row, row);
        for (int col = row + 1; col < p; ++col)
            g2 += 64.0 * k.packed(row, col) * k.packed(row, col);
    }
    if (g2 <= 0.0)
        throw std::domain_error("calibrate_alpha: K has no energy sensitivity");
    return target_energy_stderr * std::sqrt(static_cast<double>(shots) / g2);
}

} // namespace rdmpurify
