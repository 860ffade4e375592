#pragma once

#ifdef HJSG_HAS_OPENMP
#include <omp.h>
#endif

#include <exception>
#include <limits>
#include <mutex>

namespace hjsg
{
// Number of worker threads for the OpenMP kernels. Honors HJSG_THREADS as an
// upper bound on the OpenMP default.
int max_threads();

// Applies the HJSG_THREADS cap to the OpenMP runtime. Called once by the CLI;
// safe to call repeatedly.
void configure_threads_from_env();

// Collects the first exception thrown by callbacks inside a parallel region
// so that it can be rethrown on the calling thread afterwards.
class ExceptionSink
{
public:
  // f() or NaN if f throws.
  template <typename F> double value(F &&f) noexcept
  {
    try
    {
      return f();
    }
    catch (...)
    {
      capture();
      return std::numeric_limits<double>::quiet_NaN();
    }
  }

  void capture() noexcept
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!first_)
      first_ = std::current_exception();
  }

  void rethrow()
  {
    if (first_)
      std::rethrow_exception(first_);
  }

private:
  std::mutex mutex_;
  std::exception_ptr first_;
};

} // namespace hjsg
