#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace pinnlab {

/// Violated precondition or broken caller contract.
class contract_error : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Non-finite values encountered during evaluation or optimization.
class numeric_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or internally inconsistent file content.
class format_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw contract_error(message);
}

/// Deterministic uniform source. The mt19937_64 stream is pinned by the
/// standard, so identical seeds reproduce identical samples on every
/// platform; doubles are derived from the raw stream directly instead of
/// going through the (implementation-defined) standard distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Uniform integer in [0, n). Modulo bias is ~2^-53 relative; the
    /// stream being reproducible is what matters here.
    std::uint64_t integer(std::uint64_t n) {
        return gen_() % n;
    }

    /// Fisher-Yates with the pinned stream (std::shuffle is
    /// implementation-defined and would break cross-platform determinism).
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(integer(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

/// Round-trip-exact decimal formatting for doubles ("%.17g").
std::string format_double(double x);

/// Write-temp-rename so partially written output files are never observed.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

} // namespace pinnlab
