#include "copulacpd/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace copulacpd {
namespace {

inline double squared_distance(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        const double diff = a[c] - b[c];
        s += diff * diff;
    }
    return s;
}

void check_query(std::size_t m, std::size_t d, std::span<const double> z, std::size_t k) {
    if (z.size() != d) {
        throw Error(ErrorCode::DimensionMismatch,
                    "query has dimension " + std::to_string(z.size()) + ", index has " + std::to_string(d));
    }
    if (k > m) {
        throw Error(ErrorCode::KTooLarge, "k=" + std::to_string(k) + " exceeds cloud size " + std::to_string(m));
    }
}

}  // namespace

NeighborIndex::NeighborIndex(const Matrix& points) : m_(points.rows()), d_(points.cols()) {
    if (m_ == 0) throw Error(ErrorCode::EmptyCloud, "cannot index an empty point cloud");
    if (d_ == 0) throw Error(ErrorCode::DimensionMismatch, "points must have at least one coordinate");
    order_.resize(m_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    // Stage the original coordinates; build_node partitions order_ against them.
    coords_ = points.values();
    if (m_ >= kBruteForceBelow && d_ <= kMaxTreeDim) {
        nodes_.reserve(2 * (m_ / kLeafSize + 1));
        build_node(0, static_cast<std::uint32_t>(m_));
        std::vector<double> laid_out(m_ * d_);
        for (std::size_t pos = 0; pos < m_; ++pos) {
            std::copy_n(coords_.begin() + static_cast<std::ptrdiff_t>(order_[pos] * d_), d_,
                        laid_out.begin() + static_cast<std::ptrdiff_t>(pos * d_));
        }
        coords_ = std::move(laid_out);
    }
}

std::int32_t NeighborIndex::build_node(std::uint32_t begin, std::uint32_t end) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end, -1, -1, 0, 0.0});
    if (end - begin <= kLeafSize) return id;

    std::uint32_t best_dim = 0;
    double best_spread = -1.0;
    for (std::uint32_t c = 0; c < d_; ++c) {
        double lo = coords_[order_[begin] * d_ + c];
        double hi = lo;
        for (std::uint32_t p = begin + 1; p < end; ++p) {
            const double v = coords_[order_[p] * d_ + c];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > best_spread) {
            best_spread = hi - lo;
            best_dim = c;
        }
    }
    if (best_spread <= 0.0) return id;  // all points coincide; keep as a leaf

    const std::uint32_t mid = begin + (end - begin) / 2;
    auto first = order_.begin() + begin;
    auto nth = order_.begin() + mid;
    auto last = order_.begin() + end;
    const std::size_t d = d_;
    const double* base = coords_.data();
    std::nth_element(first, nth, last, [base, d, best_dim](std::size_t a, std::size_t b) {
        return base[a * d + best_dim] < base[b * d + best_dim];
    });
    // Left holds coordinates <= split, right holds coordinates >= split.
    const double split = coords_[order_[mid] * d_ + best_dim];

    const std::int32_t left = build_node(begin, mid);
    const std::int32_t right = build_node(mid, end);
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    nodes_[static_cast<std::size_t>(id)].dim = best_dim;
    nodes_[static_cast<std::size_t>(id)].split = split;
    return id;
}

void NeighborIndex::scan_range(std::uint32_t begin, std::uint32_t end, const double* q, std::size_t k,
                               std::vector<Candidate>& heap) const {
    for (std::uint32_t pos = begin; pos < end; ++pos) {
        const Candidate c{squared_distance(coords_.data() + pos * d_, q, d_), order_[pos]};
        if (heap.size() < k) {
            heap.push_back(c);
            std::push_heap(heap.begin(), heap.end());
        } else if (c < heap.front()) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = c;
            std::push_heap(heap.begin(), heap.end());
        }
    }
}

void NeighborIndex::search(std::int32_t node_id, const double* q, std::size_t k, std::vector<Candidate>& heap) const {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.left < 0) {
        scan_range(node.begin, node.end, q, k, heap);
        return;
    }
    const double delta = q[node.dim] - node.split;
    const std::int32_t near = delta <= 0.0 ? node.left : node.right;
    const std::int32_t far = delta <= 0.0 ? node.right : node.left;
    search(near, q, k, heap);
    // Equal distances must still be visited: a tied point with a lower index may live there.
    if (heap.size() < k || delta * delta <= heap.front().first) search(far, q, k, heap);
}

void NeighborIndex::query_into(std::span<const double> z, std::size_t k, std::vector<Neighbor>& out) const {
    check_query(m_, d_, z, k);
    thread_local std::vector<Candidate> heap;
    heap.clear();
    heap.reserve(k + 1);
    out.clear();
    if (k == 0) return;
    if (nodes_.empty()) {
        scan_range(0, static_cast<std::uint32_t>(m_), z.data(), k, heap);
    } else {
        search(0, z.data(), k, heap);
    }
    std::sort_heap(heap.begin(), heap.end());
    out.reserve(k);
    for (const auto& [d2, idx] : heap) out.push_back(Neighbor{idx, std::sqrt(d2)});
}

std::vector<Neighbor> NeighborIndex::query(std::span<const double> z, std::size_t k) const {
    std::vector<Neighbor> out;
    query_into(z, k, out);
    return out;
}

std::vector<Neighbor> brute_force_knn(const Matrix& points, std::span<const double> z, std::size_t k) {
    if (points.rows() == 0) throw Error(ErrorCode::EmptyCloud, "cannot search an empty point cloud");
    check_query(points.rows(), points.cols(), z, k);
    std::vector<std::pair<double, std::size_t>> all(points.rows());
    for (std::size_t i = 0; i < points.rows(); ++i) {
        all[i] = {squared_distance(points.row(i).data(), z.data(), points.cols()), i};
    }
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
    std::vector<Neighbor> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(Neighbor{all[i].second, std::sqrt(all[i].first)});
    return out;
}

}  // namespace copulacpd
