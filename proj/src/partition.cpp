#include "kptau/partition.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace kptau {

int Partition::weight() const { return std::accumulate(parts.begin(), parts.end(), 0); }

Partition Partition::conjugate() const {
    Partition c;
    const int cols = part(0);
    for (int j = 1; j <= cols; ++j) {
        int len = 0;
        while (len < length() && parts[static_cast<std::size_t>(len)] >= j) ++len;
        c.parts.push_back(len);
    }
    return c;
}

std::string Partition::str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
    return s + ")";
}

std::string FrobeniusIndex::str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < arms.size(); ++i) s += (i ? "," : "") + std::to_string(arms[i]);
    s += "|";
    for (std::size_t i = 0; i < legs.size(); ++i) s += (i ? "," : "") + std::to_string(legs[i]);
    return s + ")";
}

Partition make_partition(std::vector<int> parts) {
    while (!parts.empty() && parts.back() == 0) parts.pop_back();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] <= 0) throw std::invalid_argument("partition parts must be positive");
        if (i > 0 && parts[i] > parts[i - 1]) throw std::invalid_argument("partition parts must be weakly decreasing");
    }
    return Partition{std::move(parts)};
}

FrobeniusIndex frobenius(const Partition& p) {
    const Partition c = p.conjugate();
    FrobeniusIndex f;
    for (int i = 0; i < p.length() && p.part(i) > i; ++i) {
        f.arms.push_back(p.part(i) - i - 1);
        f.legs.push_back(c.part(i) - i - 1);
    }
    return f;
}

Partition from_frobenius(const FrobeniusIndex& f) {
    if (f.arms.size() != f.legs.size()) throw std::invalid_argument("arms and legs must have equal length");
    const int r = f.rank();
    for (int i = 1; i < r; ++i) {
        if (f.arms[static_cast<std::size_t>(i)] >= f.arms[static_cast<std::size_t>(i - 1)] ||
            f.legs[static_cast<std::size_t>(i)] >= f.legs[static_cast<std::size_t>(i - 1)])
            throw std::invalid_argument("Frobenius coordinates must be strictly decreasing");
    }
    if (r > 0 && (f.arms.back() < 0 || f.legs.back() < 0))
        throw std::invalid_argument("Frobenius coordinates must be nonnegative");
    std::vector<int> parts;
    for (int i = 0; i < r; ++i) parts.push_back(f.arms[static_cast<std::size_t>(i)] + i + 1);
    const int rows = r > 0 ? f.legs[0] + 1 : 0;
    for (int i = r; i < rows; ++i) {
        int len = 0;
        for (int j = 0; j < r; ++j)
            if (f.legs[static_cast<std::size_t>(j)] + j >= i) ++len;
        parts.push_back(len);
    }
    return make_partition(parts);
}

std::vector<Partition> partitions_up_to_weight(int max_weight, int max_rows, int max_cols) {
    std::vector<Partition> out;
    std::vector<int> cur;
    // parts of weight w with largest part <= cap, emitted in decreasing lexicographic order
    std::function<void(int, int)> rec = [&](int remaining, int cap) {
        if (remaining == 0) {
            out.push_back(Partition{cur});
            return;
        }
        if (max_rows >= 0 && static_cast<int>(cur.size()) >= max_rows) return;
        for (int p = std::min(remaining, cap); p >= 1; --p) {
            cur.push_back(p);
            rec(remaining - p, p);
            cur.pop_back();
        }
    };
    for (int w = 0; w <= max_weight; ++w) rec(w, max_cols >= 0 ? max_cols : w);
    return out;
}

std::vector<Partition> partitions_in_box(int rows, int cols) {
    return partitions_up_to_weight(rows * cols, rows, cols);
}

}  // namespace kptau
