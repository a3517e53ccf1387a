#pragma once

#include <string>
#include <vector>

namespace kptau {

// Weakly decreasing positive parts.
struct Partition {
    std::vector<int> parts;

    int weight() const;
    int length() const { return static_cast<int>(parts.size()); }
    int part(int i) const { return i < length() ? parts[static_cast<std::size_t>(i)] : 0; }  // 0-based
    Partition conjugate() const;
    std::string str() const;
    bool operator==(const Partition&) const = default;
};

// Arms a_1 > ... > a_r >= 0 and legs b_1 > ... > b_r >= 0.
struct FrobeniusIndex {
    std::vector<int> arms;
    std::vector<int> legs;

    int rank() const { return static_cast<int>(arms.size()); }
    std::string str() const;
    bool operator==(const FrobeniusIndex&) const = default;
};

Partition make_partition(std::vector<int> parts);
FrobeniusIndex frobenius(const Partition& p);
Partition from_frobenius(const FrobeniusIndex& f);

// Graded lexicographic: by weight, then lexicographically decreasing parts.
std::vector<Partition> partitions_in_box(int rows, int cols);
std::vector<Partition> partitions_up_to_weight(int max_weight, int max_rows = -1, int max_cols = -1);

}  // namespace kptau
