#include "copulacpd/core.hpp"

#include <cmath>
#include <string>

namespace copulacpd {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::EtaOutOfRange: return "EtaOutOfRange";
        case ErrorCode::EmptyCloud: return "EmptyCloud";
        case ErrorCode::KTooLarge: return "KTooLarge";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::TooFewPoints: return "TooFewPoints";
        case ErrorCode::SegmentTooSmall: return "SegmentTooSmall";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::WindowTooLarge: return "WindowTooLarge";
        case ErrorCode::UnknownScenario: return "UnknownScenario";
        case ErrorCode::BadParams: return "BadParams";
        case ErrorCode::NonPositivePrice: return "NonPositivePrice";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_) {
        throw Error(ErrorCode::LengthMismatch,
                    "matrix storage has " + std::to_string(values_.size()) + " entries, expected " +
                        std::to_string(rows_ * cols_));
    }
}

Dataset Dataset::slice(std::size_t begin, std::size_t end) const {
    Dataset out;
    out.x.assign(x.begin() + static_cast<std::ptrdiff_t>(begin), x.begin() + static_cast<std::ptrdiff_t>(end));
    out.y.assign(y.begin() + static_cast<std::ptrdiff_t>(begin), y.begin() + static_cast<std::ptrdiff_t>(end));
    const std::size_t d = z.cols();
    std::vector<double> zv(z.values().begin() + static_cast<std::ptrdiff_t>(begin * d),
                           z.values().begin() + static_cast<std::ptrdiff_t>(end * d));
    out.z = Matrix(end - begin, d, std::move(zv));
    return out;
}

const Dataset& validate(const Dataset& data) {
    const std::size_t n = data.x.size();
    if (data.y.size() != n || data.z.rows() != n) {
        throw Error(ErrorCode::LengthMismatch, "x has " + std::to_string(n) + " rows, y has " +
                                                   std::to_string(data.y.size()) + ", z has " +
                                                   std::to_string(data.z.rows()));
    }
    if (n < kMinRows) {
        throw Error(ErrorCode::TooShort, "need at least " + std::to_string(kMinRows) + " rows, got " +
                                             std::to_string(n));
    }
    if (data.z.cols() < 1) {
        throw Error(ErrorCode::LengthMismatch, "z must have at least one column");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(data.x[i])) throw Error(ErrorCode::NonFinite, "row " + std::to_string(i) + ", column x");
        if (!std::isfinite(data.y[i])) throw Error(ErrorCode::NonFinite, "row " + std::to_string(i) + ", column y");
        for (std::size_t c = 0; c < data.z.cols(); ++c) {
            if (!std::isfinite(data.z(i, c))) {
                throw Error(ErrorCode::NonFinite,
                            "row " + std::to_string(i) + ", column z_" + std::to_string(c + 1));
            }
        }
    }
    return data;
}

SplitView::SplitView(const Dataset& data, std::size_t eta) : data_(&data), eta_(eta) {
    if (eta < 1 || eta >= data.n()) {
        throw Error(ErrorCode::EtaOutOfRange,
                    "eta=" + std::to_string(eta) + " must satisfy 1 <= eta <= " + std::to_string(data.n() - 1));
    }
}

SplitView split(const Dataset& data, std::size_t eta) { return SplitView(data, eta); }

Dataset concat(const Dataset& a, const Dataset& b) {
    if (a.d() != b.d()) throw Error(ErrorCode::DimensionMismatch, "cannot concatenate datasets of different d");
    Dataset out;
    out.x = a.x;
    out.x.insert(out.x.end(), b.x.begin(), b.x.end());
    out.y = a.y;
    out.y.insert(out.y.end(), b.y.begin(), b.y.end());
    std::vector<double> zv = a.z.values();
    zv.insert(zv.end(), b.z.values().begin(), b.z.values().end());
    out.z = Matrix(a.n() + b.n(), a.d(), std::move(zv));
    return out;
}

}  // namespace copulacpd
