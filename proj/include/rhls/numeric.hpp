#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace rhls {

/// Neumaier-compensated accumulator. Summation order is the call order.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Running mean and variance (Welford) for Monte Carlo estimators.
class RunningStats {
public:
    void add(double x) noexcept {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    std::size_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
    /// Standard error of the mean.
    double stderr_mean() const noexcept {
        return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
    }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// 64-bit FNV-1a, used to fingerprint rules and kernels in reports.
class Fnv1a {
public:
    void update(const void* data, std::size_t bytes) noexcept {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < bytes; ++i) {
            state_ ^= p[i];
            state_ *= 1099511628211ULL;
        }
    }

    template <typename T>
    void update_value(const T& v) noexcept {
        update(&v, sizeof(T));
    }

    std::uint64_t digest() const noexcept { return state_; }

private:
    std::uint64_t state_ = 14695981039346656037ULL;
};

/// Worker count from RHLS_THREADS, falling back to 1.
inline unsigned default_thread_count() {
    if (const char* env = std::getenv("RHLS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

/// Runs body(begin, end) over contiguous blocks of [0, count). Each index is
/// visited by exactly one worker, so results written per index are
/// independent of the thread count.
template <typename Body>
void parallel_for_blocks(std::size_t count, unsigned threads, Body&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        body(std::size_t{0}, count);
        return;
    }
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([&body, begin, end] { body(begin, end); });
    }
}

}  // namespace rhls
