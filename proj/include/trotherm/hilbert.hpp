#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace trotherm {

using Complex = std::complex<double>;

/// Thrown when an operation needs a state with nonzero norm.
class DegenerateStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Chain site label in [1, L]. Site i lives at bit i-1 of a basis index;
/// bit 0 is spin up (S^z = +1/2), bit 1 is spin down.
class SiteIndex {
public:
    explicit SiteIndex(int value) : value_(value) {}
    int value() const { return value_; }
    int bit() const { return value_ - 1; }

private:
    int value_;
};

/// 2^L amplitudes together with a natural-log scale factor. The represented
/// vector is exp(log_norm_offset) * amplitudes.
class StateVector {
public:
    explicit StateVector(int num_sites);
    StateVector(int num_sites, std::vector<Complex> amplitudes, double log_norm_offset = 0.0);

    static StateVector basis(int num_sites, std::uint64_t index);

    int num_sites() const { return num_sites_; }
    std::size_t dim() const { return amps_.size(); }

    std::span<Complex> amplitudes() { return amps_; }
    std::span<const Complex> amplitudes() const { return amps_; }
    Complex& operator[](std::size_t i) { return amps_[i]; }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }

    double log_norm_offset() const { return log_norm_offset_; }
    void set_log_norm_offset(double value);
    void add_log_norm(double delta) { set_log_norm_offset(log_norm_offset_ + delta); }

    /// Euclidean norm of the stored amplitudes (offset not applied).
    double norm() const;

    /// Rescales to unit norm, moving ln(norm) into the offset.
    void normalize_in_place();

private:
    int num_sites_;
    std::vector<Complex> amps_;
    double log_norm_offset_ = 0.0;
};

std::size_t hilbert_dim(int num_sites);

StateVector normalize(StateVector state);

/// <a|b> of the stored amplitudes; offsets are not applied.
Complex inner(const StateVector& a, const StateVector& b);

/// Squared Schmidt coefficients for the cut A = {1..cut_after}, B = the rest,
/// sorted in descending order.
std::vector<double> schmidt_spectrum(const StateVector& state, SiteIndex cut_after);

void require_same_size(const StateVector& a, const StateVector& b, const char* what);

}  // namespace trotherm
