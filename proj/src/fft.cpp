#include "pmns/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace pmns {

namespace {

struct PlanEntry {
  fftw_plan plan = nullptr;
  fftw_complex* buffer = nullptr;
  std::size_t count = 0;

  PlanEntry() = default;
  PlanEntry(const PlanEntry&) = delete;
  PlanEntry& operator=(const PlanEntry&) = delete;
  PlanEntry(PlanEntry&& other) noexcept
      : plan(other.plan), buffer(other.buffer), count(other.count) {
    other.plan = nullptr;
    other.buffer = nullptr;
  }
  PlanEntry& operator=(PlanEntry&&) = delete;

  ~PlanEntry() {
    if (plan) fftw_destroy_plan(plan);
    if (buffer) fftw_free(buffer);
  }
};

std::mutex g_mutex;
std::map<std::pair<std::vector<int>, int>, PlanEntry> g_plans;

}  // namespace

void fft(std::complex<double>* data, const std::vector<int>& dims, int sign) {
  if (dims.empty()) throw std::invalid_argument("fft: empty dims");
  std::size_t count = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("fft: nonpositive dim");
    count *= static_cast<std::size_t>(d);
  }

  std::lock_guard<std::mutex> lock(g_mutex);
  auto key = std::make_pair(dims, sign);
  auto it = g_plans.find(key);
  if (it == g_plans.end()) {
    PlanEntry entry;
    entry.count = count;
    entry.buffer =
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count));
    if (!entry.buffer) throw std::bad_alloc();
    // FFTW_ESTIMATE keeps planning deterministic and leaves the buffer intact.
    entry.plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                               entry.buffer, entry.buffer,
                               sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                               FFTW_ESTIMATE);
    if (!entry.plan) {
      fftw_free(entry.buffer);
      throw std::runtime_error("fft: planning failed");
    }
    it = g_plans.emplace(std::move(key), std::move(entry)).first;
  }

  PlanEntry& entry = it->second;
  std::memcpy(entry.buffer, data, sizeof(fftw_complex) * count);
  fftw_execute(entry.plan);
  std::memcpy(data, entry.buffer, sizeof(fftw_complex) * count);
}

}  // namespace pmns
