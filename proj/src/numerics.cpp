#include "legendrix/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <mutex>
#include <thread>

namespace legendrix {
namespace num {

std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order) {
  // Fornberg's recursion; exact for polynomials up to degree nodes.size()-1.
  const int n = static_cast<int>(nodes.size()) - 1;
  const int m = order;
  if (n < m) throw std::invalid_argument("fd_weights: not enough nodes for requested order");
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][m];
  return w;
}

std::vector<double> derivative_on_grid(const std::vector<double>& x,
                                       const std::vector<double>& f,
                                       int order, int stencil) {
  const int n = static_cast<int>(x.size());
  if (n != static_cast<int>(f.size())) throw std::invalid_argument("derivative_on_grid: size mismatch");
  if (n < stencil) throw std::invalid_argument("derivative_on_grid: grid too short (< stencil)");
  for (int i = 1; i < n; ++i)
    if (!(x[i] > x[i - 1])) throw std::invalid_argument("derivative_on_grid: grid not strictly increasing");
  std::vector<double> out(n);
  const int half = stencil / 2;
  for (int i = 0; i < n; ++i) {
    int lo = std::clamp(i - half, 0, n - stencil);
    std::vector<double> nodes(x.begin() + lo, x.begin() + lo + stencil);
    auto w = fd_weights(x[i], nodes, order);
    double acc = 0.0;
    for (int j = 0; j < stencil; ++j) acc += w[j] * f[lo + j];
    out[i] = acc;
  }
  return out;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: need >= 2 matching nodes");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("MonotoneCubic: x not strictly increasing");
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  d_.assign(n, 0.0);
  d_[0] = delta[0];
  d_[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i)
    d_[i] = (delta[i - 1] * delta[i] <= 0.0) ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      d_[i] = d_[i + 1] = 0.0;
      continue;
    }
    double a = d_[i] / delta[i], b = d_[i + 1] / delta[i];
    double s = a * a + b * b;
    if (s > 9.0) {
      double tau = 3.0 / std::sqrt(s);
      d_[i] = tau * a * delta[i];
      d_[i + 1] = tau * b * delta[i];
    }
  }
}

double MonotoneCubic::operator()(double xq) const {
  const std::size_t n = x_.size();
  if (xq <= x_.front()) xq = x_.front();
  if (xq >= x_.back()) xq = x_.back();
  std::size_t i = std::upper_bound(x_.begin(), x_.end(), xq) - x_.begin();
  if (i > 0) --i;
  if (i + 1 >= n) i = n - 2;
  double h = x_[i + 1] - x_[i];
  double t = (xq - x_[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

namespace {
constexpr double kGolden = 0.381966011250105151;  // 2 - phi

double golden_section(const std::function<double(double)>& f, double a, double b,
                      double xtol) {
  double x1 = a + kGolden * (b - a);
  double x2 = b - kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = a + kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = b - kGolden * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}
}  // namespace

LocalMin local_min_1d(const std::function<double(double)>& f, double lo, double hi,
                      double x0, double step0, double xtol) {
  if (!(lo < hi)) throw std::invalid_argument("local_min_1d: empty window");
  x0 = std::clamp(x0, lo, hi);
  double f0 = f(x0);

  // Pick the downhill direction, then expand with doubling steps.
  double step = step0;
  double xl = std::max(lo, x0 - step), xr = std::min(hi, x0 + step);
  double fl = (xl < x0) ? f(xl) : f0;
  double fr = (xr > x0) ? f(xr) : f0;
  double a, b, xm, fm;
  if (f0 <= fl && f0 <= fr) {
    a = xl;
    b = xr;
    xm = x0;
    fm = f0;
  } else {
    int dir = (fl < fr) ? -1 : +1;
    double xprev = x0, fprev = f0;
    double xcur = (dir < 0) ? xl : xr;
    double fcur = (dir < 0) ? fl : fr;
    while (true) {
      step *= 2.0;
      double xnext = std::clamp(xcur + dir * step, lo, hi);
      if (xnext == xcur) {
        // Ran into the window edge while still descending.
        return {xcur, fcur, true};
      }
      double fnext = f(xnext);
      if (fnext >= fcur) {
        a = std::min(xprev, xnext);
        b = std::max(xprev, xnext);
        xm = xcur;
        fm = fcur;
        break;
      }
      xprev = xcur;
      fprev = fcur;
      xcur = xnext;
      fcur = fnext;
    }
    (void)fprev;
  }

  double x = golden_section(f, a, b, xtol);
  double fx = f(x);
  if (fm < fx) {
    x = xm;
    fx = fm;
  }

  // Newton polish; keep only improving in-bracket steps.
  double h = std::max(1e-7 * (hi - lo), 1e-10);
  for (int it = 0; it < 2; ++it) {
    double fp = (f(x + h) - f(x - h)) / (2 * h);
    double fpp = (f(x + h) - 2 * fx + f(x - h)) / (h * h);
    if (!(fpp > 0.0)) break;
    double xn = x - fp / fpp;
    if (xn <= a || xn >= b) break;
    double fn = f(xn);
    if (fn >= fx) break;
    x = xn;
    fx = fn;
  }
  return {x, fx, false};
}

std::mt19937_64 rng_stream(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 scramble of (seed, stream) into the engine seed
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z = z ^ (z >> 31);
  return std::mt19937_64(z);
}

namespace {
int env_thread_cap() {
  const char* s = std::getenv("LEGENDRIX_THREADS");
  if (!s) return 1;
  int v = std::atoi(s);
  if (v < 1) return 1;
  return std::min<int>(v, 256);
}
}  // namespace

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  int nt = env_thread_cap();
  if (nt <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  nt = std::min<std::size_t>(nt, n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::exception_ptr err;
  std::mutex err_mtx;
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = t; i < n; i += nt) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mtx);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::string fnv1a_hex(const void* data, std::size_t nbytes) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < nbytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string fnv1a_hex(const std::string& s) { return fnv1a_hex(s.data(), s.size()); }

std::string hash_matrix(const Mat& m) {
  std::ostringstream oss;
  oss.precision(17);
  oss << m.rows() << "x" << m.cols() << ":";
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) oss << m(i, j) << ",";
  return fnv1a_hex(oss.str());
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: bad input");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: nonpositive data");
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace num
}  // namespace legendrix
