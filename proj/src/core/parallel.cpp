#include "hjsg/core/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace hjsg
{
namespace
{
int env_thread_cap()
{
  char const *value = std::getenv("HJSG_THREADS");
  if (value == nullptr)
    return 0;
  try
  {
    return std::max(0, std::stoi(value));
  }
  catch (...)
  {
    return 0;
  }
}
} // namespace

int max_threads()
{
#ifdef HJSG_HAS_OPENMP
  int threads = omp_get_max_threads();
#else
  int threads = 1;
#endif
  int const cap = env_thread_cap();
  if (cap > 0)
    threads = std::min(threads, cap);
  return threads;
}

void configure_threads_from_env()
{
#ifdef HJSG_HAS_OPENMP
  int const cap = env_thread_cap();
  if (cap > 0)
    omp_set_num_threads(std::min(omp_get_max_threads(), cap));
#endif
}

} // namespace hjsg
