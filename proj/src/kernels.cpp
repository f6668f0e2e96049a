#include "radcns/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "radcns/errors.hpp"

namespace radcns::kernels {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(fftw_r2r_kind kind, int n) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(static_cast<int>(kind), n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<double> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
    fftw_plan plan =
        fftw_plan_r2r_1d(n, in.data(), out.data(), kind, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw Error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

void check_sizes(std::span<const double> in, std::span<double> out) {
  if (in.size() != out.size()) throw UsageError("transform: input/output size mismatch");
}

// sin(j pi / (n+1)) for j taken modulo 2(n+1), so that large products m*k keep
// full accuracy.
std::vector<double> sine_table(std::size_t n) {
  const std::size_t period = 2 * (n + 1);
  std::vector<double> table(period);
  for (std::size_t j = 0; j < period; ++j)
    table[j] = std::sin(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n + 1));
  return table;
}

std::vector<double> cosine_table(std::size_t n) {
  const std::size_t period = 2 * (n + 1);
  std::vector<double> table(period);
  for (std::size_t j = 0; j < period; ++j)
    table[j] = std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n + 1));
  return table;
}

double direct_row(std::span<const double> in, const std::vector<double>& table, std::size_t k) {
  const std::size_t n = in.size();
  const std::size_t period = 2 * (n + 1);
  double sum = 0.0;
  std::size_t phase = 0;
  for (std::size_t m = 1; m <= n; ++m) {
    phase += k;
    if (phase >= period) phase -= period;
    sum += in[m - 1] * table[phase];
  }
  return 2.0 * sum;
}

}  // namespace

void sine_sum(std::span<const double> in, std::span<double> out) {
  check_sizes(in, out);
  if (in.empty()) return;
  fftw_plan plan = PlanCache::instance().get(FFTW_RODFT00, static_cast<int>(in.size()));
  if (in.data() == out.data()) {
    std::vector<double> tmp(in.begin(), in.end());
    fftw_execute_r2r(plan, tmp.data(), out.data());
  } else {
    // FFTW does not write to the input of an out-of-place r2r 1D transform,
    // but the interface is not const-qualified.
    fftw_execute_r2r(plan, const_cast<double*>(in.data()), out.data());
  }
}

void cosine_sum(std::span<const double> in, std::span<double> out) {
  check_sizes(in, out);
  if (in.empty()) return;
  const std::size_t n = in.size();
  std::vector<double> padded(n + 2, 0.0), result(n + 2);
  std::copy(in.begin(), in.end(), padded.begin() + 1);
  fftw_plan plan = PlanCache::instance().get(FFTW_REDFT00, static_cast<int>(n + 2));
  fftw_execute_r2r(plan, padded.data(), result.data());
  std::copy(result.begin() + 1, result.begin() + 1 + static_cast<std::ptrdiff_t>(n),
            out.begin());
}

void sine_sum_reference(std::span<const double> in, std::span<double> out) {
  check_sizes(in, out);
  const auto table = sine_table(in.size());
  std::vector<double> result(in.size());
  for (std::size_t k = 1; k <= in.size(); ++k) result[k - 1] = direct_row(in, table, k);
  std::copy(result.begin(), result.end(), out.begin());
}

void sine_sum_direct(std::span<const double> in, std::span<double> out) {
  check_sizes(in, out);
  const auto table = sine_table(in.size());
  std::vector<double> result(in.size());
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 1; k <= n; ++k)
    result[static_cast<std::size_t>(k - 1)] = direct_row(in, table, static_cast<std::size_t>(k));
  std::copy(result.begin(), result.end(), out.begin());
}

void cosine_sum_reference(std::span<const double> in, std::span<double> out) {
  check_sizes(in, out);
  const auto table = cosine_table(in.size());
  std::vector<double> result(in.size());
  for (std::size_t m = 1; m <= in.size(); ++m) result[m - 1] = direct_row(in, table, m);
  std::copy(result.begin(), result.end(), out.begin());
}

void apply_modes_serial(std::span<const ModeMatrix> mats, std::span<double> a,
                        std::span<double> v) {
  if (mats.size() != a.size() || a.size() != v.size())
    throw UsageError("apply_modes: size mismatch");
  for (std::size_t k = 0; k < mats.size(); ++k) {
    const ModeMatrix& m = mats[k];
    const double ak = a[k];
    const double vk = v[k];
    a[k] = m.m11 * ak + m.m12 * vk;
    v[k] = m.m21 * ak + m.m22 * vk;
  }
}

void apply_modes(std::span<const ModeMatrix> mats, std::span<double> a, std::span<double> v) {
  if (mats.size() != a.size() || a.size() != v.size())
    throw UsageError("apply_modes: size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(mats.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const ModeMatrix& m = mats[k];
    const double ak = a[k];
    const double vk = v[k];
    a[k] = m.m11 * ak + m.m12 * vk;
    v[k] = m.m21 * ak + m.m22 * vk;
  }
}

namespace {

std::complex<double> oscillatory_point(std::span<const QuadratureNode> nodes,
                                       const std::array<double, 3>& x) {
  std::complex<double> sum = 0.0;
  for (const auto& node : nodes) {
    const double phase = x[0] * node.xi[0] + x[1] * node.xi[1] + x[2] * node.xi[2];
    sum += node.weight * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return sum;
}

}  // namespace

void oscillatory_sum_serial(std::span<const QuadratureNode> nodes,
                            std::span<const std::array<double, 3>> points,
                            std::span<std::complex<double>> out) {
  if (points.size() != out.size()) throw UsageError("oscillatory_sum: size mismatch");
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = oscillatory_point(nodes, points[i]);
}

void oscillatory_sum(std::span<const QuadratureNode> nodes,
                     std::span<const std::array<double, 3>> points,
                     std::span<std::complex<double>> out) {
  if (points.size() != out.size()) throw UsageError("oscillatory_sum: size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = oscillatory_point(nodes, points[k]);
  }
}

}  // namespace radcns::kernels
