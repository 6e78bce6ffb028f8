#include "oscwave/fft.hpp"

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oscwave::fft {

using Complex = std::complex<double>;

namespace {

// Plans are cached per (size, direction, placement) for the process
// lifetime. FFTW_ESTIMATE keeps planning deterministic (no runtime timing),
// and FFTW_UNALIGNED lets one plan serve any caller-provided buffer.
// fftw_execute_dft is thread-safe; plan creation is not, hence the mutex.

using Key = std::pair<std::size_t, int>;

class PlanCache {
  public:
    fftw_plan get(std::size_t n, int sign, bool in_place) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto& table = in_place ? in_place_ : out_of_place_;
        auto it = table.find({n, sign});
        if (it != table.end()) return it->second;

        fftw_complex* a = fftw_alloc_complex(n);
        fftw_complex* b = in_place ? a : fftw_alloc_complex(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), a, b, sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (b != a) fftw_free(b);
        fftw_free(a);
        if (plan == nullptr)
            throw std::runtime_error("fft: planner failed for size " +
                                     std::to_string(n));
        table.emplace(Key{n, sign}, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : out_of_place_) fftw_destroy_plan(plan);
        for (auto& [key, plan] : in_place_) fftw_destroy_plan(plan);
    }

  private:
    std::mutex mutex_;
    std::map<Key, fftw_plan> out_of_place_;
    std::map<Key, fftw_plan> in_place_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

void execute(const std::vector<Complex>& in, std::vector<Complex>& out,
             int sign) {
    if (in.empty()) throw std::invalid_argument("fft: empty input");
    out.resize(in.size());
    const bool in_place = in.data() == out.data();
    fftw_plan plan = cache().get(in.size(), sign, in_place);
    fftw_execute_dft(plan, as_fftw(const_cast<Complex*>(in.data())),
                     as_fftw(out.data()));
}

void scale(std::vector<Complex>& v, double s) {
    for (auto& z : v) z *= s;
}

}  // namespace

void forward(const std::vector<Complex>& in, std::vector<Complex>& out) {
    execute(in, out, FFTW_FORWARD);
}

void inverse(const std::vector<Complex>& in, std::vector<Complex>& out) {
    execute(in, out, FFTW_BACKWARD);
    scale(out, 1.0 / static_cast<double>(out.size()));
}

void forward_inplace(std::vector<Complex>& data) { execute(data, data, FFTW_FORWARD); }

void inverse_inplace(std::vector<Complex>& data) {
    execute(data, data, FFTW_BACKWARD);
    scale(data, 1.0 / static_cast<double>(data.size()));
}

}  // namespace oscwave::fft
