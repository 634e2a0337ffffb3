#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace auxmean {

/// splitmix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives statistically independent stream seeds from seed material.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) + b);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

/// Deterministic standard-normal stream. The generator is mt19937_64 (fully
/// specified by the standard), uniforms take the top 53 bits shifted into
/// (0, 1], and normals come from the Box-Muller transform. Identical seeds
/// give bit-identical draws within one implementation; cross-platform
/// agreement holds only through the libm in use.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in (0, 1], 53-bit resolution; never 0 so log() is finite.
    double uniform() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    void fill(Eigen::Ref<Eigen::VectorXd> out) {
        for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = next();
    }

    /// Uniform direction on the unit sphere.
    Eigen::VectorXd unit_vector(int d) {
        Eigen::VectorXd v(d);
        double norm = 0.0;
        do {
            fill(v);
            norm = v.norm();
        } while (norm < 1e-100);
        return v / norm;
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace auxmean
