#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>

namespace qrev::detail {

/// Unnormalised in-place complex FFT of a fixed length.  Plans are created
/// with FFTW_ESTIMATE so results do not depend on planner timing; planning
/// is serialised because the FFTW planner is not thread-safe, execution is.
class Fft {
 public:
  explicit Fft(int n) : n_(n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_complex* scratch = fftw_alloc_complex(n);
    forward_ = fftw_plan_dft_1d(n, scratch, scratch, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward_ = fftw_plan_dft_1d(n, scratch, scratch, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
  }
  ~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  int size() const { return n_; }

  void forward(std::complex<double>* data) const { fftw_execute_dft(forward_, cast(data), cast(data)); }
  void backward(std::complex<double>* data) const { fftw_execute_dft(backward_, cast(data), cast(data)); }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }
  static fftw_complex* cast(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

  int n_;
  fftw_plan forward_;
  fftw_plan backward_;
};

}  // namespace qrev::detail
