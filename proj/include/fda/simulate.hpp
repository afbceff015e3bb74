#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <functional>
#include <memory>

#include "fda/basis.hpp"
#include "fda/grid.hpp"

namespace fda {

/// Finite-dimensional Karhunen-Loeve generator: curves
///   X(t) = sum_k sqrt(lambda_k) Z_k e_k(t) + noise,
/// where e_k = sum_i mixing(k,i) f_i over an orthonormal basis and the noise
/// is grid white noise of variance sigma0^2/dt, so projected coefficients
/// carry noise variance sigma0^2 per component.
struct KlModel {
    Eigen::MatrixXd mixing;  // K x I, orthonormal rows
    Eigen::VectorXd lambda;  // nonincreasing, positive
    std::shared_ptr<const OrthoBasis> basis;
    double sigma0 = 0.0;

    KlModel(Eigen::MatrixXd mixing, Eigen::VectorXd lambda,
            std::shared_ptr<const OrthoBasis> basis, double sigma0);
};

/// The 4-factor sparse test model: 9-element cubic splinet on irregular knots
/// {0.1, 0.2, 0.4, 0.7, 0.85}, eigenvalues (1, 0.5, 0.3, 0.01), mixing rows
/// pairing distant splinet elements.
KlModel kl_sparse_example(double sigma0 = 0.0);

/// Noiseless model curve for a fixed factor vector z.
Eigen::VectorXd kl_curve(const KlModel& model, const Eigen::VectorXd& z, const Grid& grid);

FunctionalDataset sample_kl(const KlModel& model, int n, const Grid& grid, std::uint64_t seed);

/// Standard Brownian bridge W(t) - t W(1) from a seeded Gaussian walk;
/// exactly zero at t = 0 and t = 1.
Eigen::VectorXd brownian_bridge(const Grid& grid, std::uint64_t seed);

/// Discrete convolution of a kernel (sampled at step `kernel_step`, which
/// must equal the grid step) with the Brownian-bridge increments:
/// y_j = dt * sum_l kernel_l * dB_{j-l}.
Eigen::VectorXd filtered_bridge(const Eigen::VectorXd& kernel, double kernel_step,
                                const Grid& grid, std::uint64_t seed);

/// Quarter-vehicle parameters in SI units plus travel speed.
struct VehicleParams {
    double m_s = 3400.0;   // sprung mass [kg]
    double k_s = 270000.0; // suspension stiffness [N/m]
    double c_s = 6000.0;   // suspension damping [Ns/m]
    double m_t = 350.0;    // tire mass [kg]
    double k_t = 950000.0; // tire stiffness [N/m]
    double c_t = 300.0;    // tire damping [Ns/m]
    double v = 15.0;       // speed [m/s]
};

struct VehicleResponse {
    Eigen::VectorXd x;  // sprung-mass position
    Eigen::VectorXd u;  // tire-top position
    Eigen::VectorXd y;  // force response m_s * U''
};

/// Integrates the cascade m_t U'' + c_t U' + k_t U = dR,
/// m_s X'' + c_s X' + k_s X = dU with fixed-step RK4 and zero initial
/// conditions.  The grid coordinate is position over a 1 km stretch; speed v
/// converts it to physical time.  Forcing is the zero-order-held finite
/// difference of the road samples.
VehicleResponse vehicle_response(const VehicleParams& params, const Eigen::VectorXd& road,
                                 const Grid& grid);

/// Slepian model of a stationary Gaussian process at an up-crossing of level
/// u:  X_u(t) = u r(t) - R r'(t) + Delta(t), with R standard Rayleigh and
/// Delta Gaussian with covariance r(t-s) - r(t)r(s) - r'(t)r'(s).
class SlepianGaussModel {
public:
    SlepianGaussModel(std::function<double(double)> r, std::function<double(double)> r_prime,
                      double u);

    /// r(t) = exp(-t^2/2), which satisfies the normalization exactly.
    static SlepianGaussModel gaussian(double u);

    double r(double t) const { return r_(t); }
    double r_prime(double t) const { return r_prime_(t); }
    double u() const { return u_; }

private:
    std::function<double(double)> r_;
    std::function<double(double)> r_prime_;
    double u_;
};

FunctionalDataset sample_slepian_gauss(const SlepianGaussModel& model, int n, const Grid& grid,
                                       std::uint64_t seed);

/// Per-curve parameter ranges for the random-functional generator:
///   y_i(t) = a_i exp(-(t-c_i)^2 / (2 w_i^2)) + noise_scale * (kappa (*) dB_i)(t),
/// with (a_i, c_i, w_i) uniform on the ranges below and kappa a Gaussian
/// smoothing kernel of the given width applied to Brownian-bridge increments.
struct RandomFunctionalConfig {
    std::array<double, 2> amplitude{0.5, 2.0};
    std::array<double, 2> location{0.15, 0.85};
    std::array<double, 2> width{0.02, 0.08};
    double noise_scale = 1.0;
    double kernel_width = 0.02;
};

FunctionalDataset random_functional_dataset(int n, const Grid& grid, std::uint64_t seed,
                                            const RandomFunctionalConfig& config = {});

/// Gaussian kernel of the given width sampled at step dt, truncated at three
/// widths, normalized to unit integral and pre-divided by dt so that
/// filtered_bridge(kernel, dt, ...) approximates int kappa(t-s) dB(s).
Eigen::VectorXd gaussian_smoothing_kernel(double width, double dt);

}  // namespace fda
