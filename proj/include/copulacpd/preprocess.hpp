#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace copulacpd {

enum class SeriesKind { Price, Rate };

SeriesKind parse_series_kind(const std::string& name);
std::string to_string(SeriesKind kind);

/// Price: log(p[i]) - log(p[i - 1]). Rate: r[i] - r[i - 1]. Output has one element fewer.
std::vector<double> to_returns(std::span<const double> series, SeriesKind kind);

enum class EwmaMean { Ewma, Zero };

EwmaMean parse_ewma_mean(const std::string& name);
std::string to_string(EwmaMean mode);

inline constexpr std::size_t kDailySpan = 63;
inline constexpr std::size_t kMonthlySpan = 12;

struct EwmaConfig {
    std::size_t span = kDailySpan;
    double epsilon = 1e-6;
    EwmaMean mean = EwmaMean::Ewma;

    double alpha() const { return 2.0 / (static_cast<double>(span) + 1.0); }
    void validate() const;
};

/// Volatility normalisation x[i] / (sigma[i] + epsilon), where
///   mu[0] = x[0],                mu[i] = (1 - a) mu[i-1] + a x[i]   (or mu = 0)
///   var[-1] = sample variance of the first min(span, n) values,
///   var[i] = (1 - a) var[i-1] + a (x[i] - mu[i])^2.
std::vector<double> ewma_normalize(std::span<const double> x, const EwmaConfig& cfg);

}  // namespace copulacpd
