#include "trotherm/hilbert.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace trotherm {

namespace {

constexpr int kMaxSites = 30;

void check_sites(int num_sites) {
    if (num_sites < 1 || num_sites > kMaxSites)
        throw std::invalid_argument("num_sites out of range: " + std::to_string(num_sites));
}

}  // namespace

std::size_t hilbert_dim(int num_sites) {
    check_sites(num_sites);
    return std::size_t{1} << num_sites;
}

StateVector::StateVector(int num_sites) : num_sites_(num_sites), amps_(hilbert_dim(num_sites)) {}

StateVector::StateVector(int num_sites, std::vector<Complex> amplitudes, double log_norm_offset)
    : num_sites_(num_sites), amps_(std::move(amplitudes)) {
    if (amps_.size() != hilbert_dim(num_sites))
        throw std::invalid_argument("amplitude count " + std::to_string(amps_.size()) +
                                    " does not match 2^" + std::to_string(num_sites));
    set_log_norm_offset(log_norm_offset);
}

StateVector StateVector::basis(int num_sites, std::uint64_t index) {
    StateVector s(num_sites);
    if (index >= s.dim()) throw std::invalid_argument("basis index out of range");
    s.amps_[index] = 1.0;
    return s;
}

void StateVector::set_log_norm_offset(double value) {
    if (!std::isfinite(value)) throw std::domain_error("log_norm_offset must be finite");
    log_norm_offset_ = value;
}

double StateVector::norm() const {
    // Scaled sum of squares; raw squares of tiny amplitudes would underflow.
    double scale = 0.0;
    for (const auto& a : amps_) scale = std::max({scale, std::abs(a.real()), std::abs(a.imag())});
    if (scale == 0.0) return 0.0;
    double sum = 0.0;
    for (const auto& a : amps_) sum += std::norm(a / scale);
    return scale * std::sqrt(sum);
}

void StateVector::normalize_in_place() {
    const double n = norm();
    if (n == 0.0 || !std::isfinite(n)) throw DegenerateStateError("degenerate state: norm is " + std::to_string(n));
    const double inv = 1.0 / n;
    for (auto& a : amps_) a *= inv;
    add_log_norm(std::log(n));
}

StateVector normalize(StateVector state) {
    state.normalize_in_place();
    return state;
}

void require_same_size(const StateVector& a, const StateVector& b, const char* what) {
    if (a.num_sites() != b.num_sites())
        throw std::invalid_argument(std::string(what) + ": size mismatch (" + std::to_string(a.num_sites()) +
                                    " vs " + std::to_string(b.num_sites()) + " sites)");
}

Complex inner(const StateVector& a, const StateVector& b) {
    require_same_size(a, b, "inner");
    Complex acc = 0.0;
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

std::vector<double> schmidt_spectrum(const StateVector& state, SiteIndex cut_after) {
    const int L = state.num_sites();
    const int cut = cut_after.value();
    if (cut < 1 || cut >= L)
        throw std::invalid_argument("schmidt_spectrum: cut " + std::to_string(cut) + " outside [1, " +
                                    std::to_string(L - 1) + "]");
    // Sites 1..cut are the low bits, so column-major (a, b) is exactly the storage order.
    const Eigen::Index rows = Eigen::Index{1} << cut;
    const Eigen::Index cols = Eigen::Index{1} << (L - cut);
    Eigen::Map<const Eigen::MatrixXcd> psi(state.amplitudes().data(), rows, cols);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(psi);
    const auto& sv = svd.singularValues();
    std::vector<double> lambda(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index k = 0; k < sv.size(); ++k) lambda[k] = sv[k] * sv[k];
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    return lambda;
}

}  // namespace trotherm
