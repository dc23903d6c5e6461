#include "ewr/spectral.hpp"

#include "ewr/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace ewr {
namespace {

// fftw planning is not thread-safe; execution with new-array execute is.
struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, std::size_t, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(int rank, std::size_t n, int sign) {
    std::lock_guard lock(mutex);
    const auto key = std::make_tuple(rank, n, sign);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    const std::size_t total = rank == 2 ? n * n : n;
    std::vector<cplx> in(total), out(total);
    auto* pin = reinterpret_cast<fftw_complex*>(in.data());
    auto* pout = reinterpret_cast<fftw_complex*>(out.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int ni = static_cast<int>(n);
    fftw_plan plan = rank == 2 ? fftw_plan_dft_2d(ni, ni, pin, pout, sign, flags)
                               : fftw_plan_dft_1d(ni, pin, pout, sign, flags);
    if (plan == nullptr) throw NumericalError("fftw: plan creation failed");
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void execute(int rank, std::size_t n, int sign, const cplx* in, cplx* out) {
  fftw_plan plan = cache().get(rank, n, sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void require_finite(const ComplexField& f) {
  if (!f.all_finite()) throw NumericalError("spectral transform: non-finite input");
}

}  // namespace

ComplexField spectral_transform(const ComplexField& f) {
  if (f.space() != Space::Real) throw std::invalid_argument("spectral_transform: input must be real-space");
  require_finite(f);
  ComplexField out(f.spec(), Space::Fourier);
  execute(2, f.n(), FFTW_FORWARD, f.values().data(), out.values().data());
  const double h = f.spec().pixel_size();
  out *= h * h;
  return out;
}

ComplexField inverse_spectral_transform(const ComplexField& f) {
  if (f.space() != Space::Fourier)
    throw std::invalid_argument("inverse_spectral_transform: input must be Fourier-space");
  require_finite(f);
  ComplexField out(f.spec(), Space::Real);
  execute(2, f.n(), FFTW_BACKWARD, f.values().data(), out.values().data());
  const double dv = f.spec().freq_step();
  out *= dv * dv;
  return out;
}

ComplexField spectral_transform(const RealField& f) { return spectral_transform(to_complex(f)); }

void dft_1d(std::span<cplx> data, int sign) {
  if (sign != -1 && sign != 1) throw std::invalid_argument("dft_1d: sign must be -1 or +1");
  if (data.empty()) return;
  std::vector<cplx> out(data.size());
  execute(1, data.size(), sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, data.data(), out.data());
  std::copy(out.begin(), out.end(), data.begin());
}

}  // namespace ewr
