#pragma once

#include <cstdint>

#include "leafspace/vec.hpp"

namespace leafspace {

/// Counter-based generator (splitmix64 over seed/counter pairs). Stateless
/// next() keeps runs reproducible across platforms and thread schedules:
/// sample j of stream s depends only on (seed, s, j).
class CounterRng {
public:
    explicit CounterRng(uint64_t seed, uint64_t stream = 0)
        : seed_(seed ^ (0x9e3779b97f4a7c15ull * (stream + 1))), counter_(0) {}

    uint64_t next_u64() { return mix(seed_ + 0x9e3779b97f4a7c15ull * ++counter_); }

    /// Uniform in [0,1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    int uniform_int(int a, int b) {  // inclusive bounds
        return a + static_cast<int>(next_u64() % static_cast<uint64_t>(b - a + 1));
    }

    Vec uniform_vec(int n, double a, double b) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = uniform(a, b);
        return v;
    }

    /// Unit vector, rejection-sampled from the cube.
    Vec unit_vec(int n) {
        for (;;) {
            Vec v = uniform_vec(n, -1.0, 1.0);
            double r = v.norm();
            if (r > 1e-3 && r <= 1.0) return v * (1.0 / r);
        }
    }

private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    uint64_t seed_;
    uint64_t counter_;
};

}  // namespace leafspace
