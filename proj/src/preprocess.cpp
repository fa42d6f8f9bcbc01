#include "copulacpd/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "copulacpd/error.hpp"

namespace copulacpd {

SeriesKind parse_series_kind(const std::string& name) {
    if (name == "price") return SeriesKind::Price;
    if (name == "rate") return SeriesKind::Rate;
    throw Error(ErrorCode::BadConfig, "unknown series kind '" + name + "' (expected price or rate)");
}

std::string to_string(SeriesKind kind) { return kind == SeriesKind::Price ? "price" : "rate"; }

EwmaMean parse_ewma_mean(const std::string& name) {
    if (name == "ewma") return EwmaMean::Ewma;
    if (name == "zero") return EwmaMean::Zero;
    throw Error(ErrorCode::BadConfig, "unknown ewma mean '" + name + "' (expected ewma or zero)");
}

std::string to_string(EwmaMean mode) { return mode == EwmaMean::Ewma ? "ewma" : "zero"; }

std::vector<double> to_returns(std::span<const double> series, SeriesKind kind) {
    if (series.size() < 2) throw Error(ErrorCode::TooShort, "need at least 2 values to difference");
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!std::isfinite(series[i])) throw Error(ErrorCode::NonFinite, "value at index " + std::to_string(i));
        if (kind == SeriesKind::Price && series[i] <= 0.0) {
            throw Error(ErrorCode::NonPositivePrice, "price at index " + std::to_string(i) + " is not positive");
        }
    }
    std::vector<double> out(series.size() - 1);
    for (std::size_t i = 1; i < series.size(); ++i) {
        out[i - 1] = kind == SeriesKind::Price ? std::log(series[i]) - std::log(series[i - 1])
                                               : series[i] - series[i - 1];
    }
    return out;
}

void EwmaConfig::validate() const {
    if (span < 2) throw Error(ErrorCode::BadConfig, "span must be >= 2");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw Error(ErrorCode::BadConfig, "epsilon must be finite and >= 0");
}

std::vector<double> ewma_normalize(std::span<const double> x, const EwmaConfig& cfg) {
    cfg.validate();
    const std::size_t n = x.size();
    // the variance seed needs two points; shorter-than-span series warm up on what they have
    if (n < 2) throw Error(ErrorCode::TooShort, "series of length " + std::to_string(n) + " is too short (need 2)");
    const double a = cfg.alpha();

    const std::size_t warm = std::min(cfg.span, n);
    double mean0 = 0.0;
    for (std::size_t i = 0; i < warm; ++i) mean0 += x[i];
    mean0 /= static_cast<double>(warm);
    double var = 0.0;
    for (std::size_t i = 0; i < warm; ++i) var += (x[i] - mean0) * (x[i] - mean0);
    var /= static_cast<double>(warm - 1);

    std::vector<double> out(n);
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (cfg.mean == EwmaMean::Ewma) mu = i == 0 ? x[0] : (1.0 - a) * mu + a * x[i];
        const double dev = x[i] - mu;
        var = (1.0 - a) * var + a * dev * dev;
        out[i] = x[i] / (std::sqrt(var) + cfg.epsilon);
    }
    return out;
}

}  // namespace copulacpd
