// Benchmarks the OpenMP orbit-grid kernel against the serial reference
// loop and verifies the two produce byte-identical CSV.  The grid kernel
// is the same per-seed computation the CLI portrait command runs: each
// seed owns its output slot, so any worker count must render the exact
// same bytes.
//
//   bench_parallel          full-size grid, timing table
//   bench_parallel --quick  small grid (wired into ctest as a smoke test)
#include <chrono>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "billiards/dynamics.hpp"
#include "billiards/errors.hpp"
#include "billiards/geometry.hpp"
#include "billiards/parallel.hpp"

using namespace billiards;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct GridSpec {
    int nPhi = 0;
    int nP = 0;
    int iters = 0;
    double pMin = -0.9;
    double pMax = 0.9;
};

// Renders the orbit grid to CSV text.  workers < 0 selects the serial
// reference loop; otherwise the parallel kernel runs with that worker
// count (1 degenerates to serial inside parallel_for).
std::string render_grid(const Oval& oval, const GridSpec& spec, int workers) {
    const std::size_t nSeeds = std::size_t(spec.nPhi) * std::size_t(spec.nP);
    std::vector<std::vector<PhasePoint>> rows(nSeeds);
    auto body = [&](std::size_t s) {
        int i = int(s) / spec.nP, j = int(s) % spec.nP;
        double phi = 2.0 * kPi * i / spec.nPhi;
        double p = (spec.nP == 1)
                       ? (spec.pMin + spec.pMax) / 2.0
                       : spec.pMin + (spec.pMax - spec.pMin) * j / (spec.nP - 1);
        std::vector<PhasePoint>& out = rows[s];
        PhasePoint x{phi, p};
        out.push_back(x);
        for (int k = 0; k < spec.iters; ++k) {
            try {
                x = billiard_step(oval, x).next;
            } catch (const BilliardError&) {
                break;
            }
            out.push_back(x);
        }
    };
    if (workers < 0)
        serial_for(nSeeds, body);
    else
        parallel_for(nSeeds, workers, body);

    std::string csv = "seedIndex,iter,phi,p\n";
    char buf[96];
    for (std::size_t s = 0; s < nSeeds; ++s)
        for (std::size_t k = 0; k < rows[s].size(); ++k) {
            std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", s, k,
                          rows[s][k].phi, rows[s][k].p);
            csv += buf;
        }
    return csv;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) quick = true;

    SupportFunction sf(3, 1.0, {{3, 0.05, 0.0}});
    Oval oval(sf);
    GridSpec spec;
    spec.nPhi = quick ? 12 : 64;
    spec.nP = quick ? 6 : 24;
    spec.iters = quick ? 100 : 1500;

    std::printf("orbit grid: %d x %d seeds, %d iters each\n", spec.nPhi,
                spec.nP, spec.iters);

    auto t0 = std::chrono::steady_clock::now();
    std::string reference = render_grid(oval, spec, -1);
    double tSerial = seconds_since(t0);
    std::printf("  %-22s %8.3f s  (reference)\n", "serial_for", tSerial);

    int failures = 0;
    for (int workers : {1, 2, 4, 8}) {
        t0 = std::chrono::steady_clock::now();
        std::string out = render_grid(oval, spec, workers);
        double t = seconds_since(t0);
        bool same = out == reference;
        std::printf("  parallel_for workers=%-2d %6.3f s  speedup %.2fx  %s\n",
                    workers, t, tSerial / t,
                    same ? "bytes identical" : "MISMATCH");
        if (!same) ++failures;
    }

    if (failures) {
        std::cerr << failures << " worker count(s) diverged from the serial "
                  << "reference\n";
        return 1;
    }
    return 0;
}
