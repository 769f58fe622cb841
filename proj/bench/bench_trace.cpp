// Timing harness for the parallel kernels against their serial references:
// trace extraction (vertex fan-out) and ensemble sampling (stream fan-out).
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "cle/drivers.hpp"
#include "cle/loewner.hpp"
#include "cle/sampler.hpp"

using namespace cle;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void bench_trace(std::size_t steps) {
    RngStream rng(2024, 0);
    const TimeGrid grid(0.0, 1e-4, steps);
    const DrivingPath d = brownian_driver(6.0, grid, rng);
    TraceOptions opt;
    opt.stride = steps / 2000;

    auto t0 = Clock::now();
    const Trace serial = trace_serial(d, opt);
    const double ts = seconds_since(t0);

    t0 = Clock::now();
    const Trace parallel = trace(d, opt);
    const double tp = seconds_since(t0);

    bool identical = serial.vertices == parallel.vertices;
    std::printf("trace       steps=%zu vertices=%zu  serial %.3fs  parallel %.3fs  "
                "speedup %.2fx  identical=%s\n",
                steps, serial.vertices.size(), ts, tp, ts / tp, identical ? "yes" : "NO");
}

void bench_ensemble(std::size_t n) {
    const Params p = Params::make(6.0, 5e-4, 30.0, 2024);

    auto t0 = Clock::now();
    const auto serial = sample_ensemble(Complex(0, 0), p, n, 0, false);
    const double ts = seconds_since(t0);

    t0 = Clock::now();
    const auto parallel = sample_ensemble(Complex(0, 0), p, n, 0, true);
    const double tp = seconds_since(t0);

    bool identical = true;
    for (std::size_t i = 0; i < n; ++i)
        identical = identical && serial[i].boundary == parallel[i].boundary &&
                    serial[i].diameter == parallel[i].diameter;
    std::printf("ensemble    n=%zu  serial %.3fs  parallel %.3fs  speedup %.2fx  "
                "identical=%s\n",
                n, ts, tp, ts / tp, identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t steps = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 200000;
    std::size_t n = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 8;
    std::printf("threads=%d\n", omp_get_max_threads());
    bench_trace(steps);
    bench_ensemble(n);
    return 0;
}
