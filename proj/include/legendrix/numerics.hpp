#ifndef LEGENDRIX_NUMERICS_HPP
#define LEGENDRIX_NUMERICS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace legendrix {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Thrown when an algorithm fails for numerical (not usage) reasons;
/// the CLI maps it to exit code 3.
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

namespace num {

/// Finite-difference weights on arbitrary nodes (Fornberg 1988).
/// Returns w such that f^(order)(x0) ~= sum_i w[i] f(nodes[i]).
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order);

/// Derivative of sampled data on a strictly increasing grid using
/// windows of `stencil` nodes (centered where possible, one-sided at ends).
std::vector<double> derivative_on_grid(const std::vector<double>& x,
                                       const std::vector<double>& f,
                                       int order = 1, int stencil = 5);

/// Fritsch-Carlson monotone cubic interpolant. Input must be strictly
/// increasing in x; y monotone data stays monotone under evaluation.
class MonotoneCubic {
public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  double operator()(double xq) const;
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

private:
  std::vector<double> x_, y_, d_;
};

struct LocalMin {
  double x = 0.0;
  double value = 0.0;
  bool at_boundary = false;
};

/// Minimize f over [lo, hi] starting from x0: downhill bracketing with
/// doubling steps, golden-section, then a couple of Newton polish steps.
/// A seed that slides into a window edge while still descending is
/// returned clamped exactly at that edge with at_boundary set.
LocalMin local_min_1d(const std::function<double(double)>& f, double lo, double hi,
                      double x0, double step0, double xtol);

/// Deterministic per-stream RNG: same (seed, stream) -> same sequence,
/// independent of evaluation order or thread count.
std::mt19937_64 rng_stream(std::uint64_t seed, std::uint64_t stream);

/// Chunked parallel map over [0, n); worker count capped by the
/// LEGENDRIX_THREADS environment variable (default 1). Results must be
/// written by index so the outcome is thread-count independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// FNV-1a 64-bit hash, hex-encoded; used for form hashes and artifact
/// fingerprints.
std::string fnv1a_hex(const void* data, std::size_t nbytes);
std::string fnv1a_hex(const std::string& s);
std::string hash_matrix(const Mat& m);

/// log-log least-squares slope of y against x (both positive).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace num
}  // namespace legendrix

#endif
