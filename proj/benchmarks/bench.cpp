// Compares the OpenMP kernels against their serial reference implementations:
// allowed-edge detection (one matching computation per edge) and side-choice
// enumeration (one two-phase solve per cycle mask). Prints wall-clock times
// and verifies that both versions return identical results.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>
#include <utility>
#include <vector>

#include "matchjump/fpt.hpp"
#include "matchjump/matching.hpp"

using namespace mj;

namespace {

using clock_type = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& fn) {
    auto t0 = clock_type::now();
    fn();
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

Graph random_bipartite(int half, int percent, unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<std::pair<int, int>> es;
    for (int a = 0; a < half; ++a)
        for (int b = 0; b < half; ++b)
            if (static_cast<int>(rng() % 100) < percent) es.push_back({a, half + b});
    return Graph(2 * half, es);
}

// c disjoint copies of a 4-cycle with one free pendant on each side: every
// one of the 2^c side masks is feasible, so the mask loop carries real work.
void two_door(int c, Graph& g, Matching& ms, Matching& mt) {
    std::vector<std::pair<int, int>> es;
    std::vector<int> a, b;
    for (int i = 0; i < c; ++i) {
        int base = 6 * i, e0 = static_cast<int>(es.size());
        es.push_back({base + 0, base + 1});
        es.push_back({base + 1, base + 2});
        es.push_back({base + 2, base + 3});
        es.push_back({base + 0, base + 3});
        es.push_back({base + 4, base + 1});
        es.push_back({base + 5, base + 0});
        a.insert(a.end(), {e0, e0 + 2});
        b.insert(b.end(), {e0 + 1, e0 + 3});
    }
    g = Graph(6 * c, es);
    ms = Matching(g, a);
    mt = Matching(g, b);
}

}  // namespace

int main() {
    std::printf("hardware threads: %d\n\n", omp_get_max_threads());

    std::printf("%-34s %10s %10s %10s %8s %6s\n", "kernel", "serial ms", "1T ms", "par ms",
                "speedup", "agree");

    for (int half : {40, 60, 80}) {
        Graph g = random_bipartite(half, 30, 1000u + static_cast<unsigned>(half));
        std::vector<int> serial, one, par;
        double ts = time_ms([&] { serial = allowed_edges_serial(g); });
        double t1 = time_ms([&] { one = allowed_edges(g, 1); });
        double tp = time_ms([&] { par = allowed_edges(g, 0); });
        char name[64];
        std::snprintf(name, sizeof name, "allowed_edges n=%d m=%d", g.n(), g.m());
        std::printf("%-34s %10.1f %10.1f %10.1f %7.2fx %6s\n", name, ts, t1, tp, ts / tp,
                    (serial == one && serial == par) ? "yes" : "NO");
    }

    for (int c : {5, 6, 7}) {
        Graph g;
        Matching ms, mt;
        two_door(c, g, ms, mt);
        std::vector<long long> serial, one, par;
        double ts = time_ms([&] { serial = side_choice_lengths_serial(g, ms, mt); });
        double t1 = time_ms([&] { one = side_choice_lengths(g, ms, mt, 1); });
        double tp = time_ms([&] { par = side_choice_lengths(g, ms, mt, 0); });
        char name[64];
        std::snprintf(name, sizeof name, "side_choice_lengths masks=%zu", serial.size());
        std::printf("%-34s %10.1f %10.1f %10.1f %7.2fx %6s\n", name, ts, t1, tp, ts / tp,
                    (serial == one && serial == par) ? "yes" : "NO");
    }
    return 0;
}
