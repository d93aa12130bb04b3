#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "mrdcs/matrix.hpp"

namespace mrdcs::lds {

enum class Generator { sobol, grid1d };

// One dimension of a Sobol' construction: primitive polynomial degree s,
// its middle coefficient bits a, and the initial direction integers
// m_1..m_s (each odd, m_k < 2^k).
struct DirectionRow {
    unsigned degree = 0;
    std::uint32_t coeffs = 0;
    std::vector<std::uint32_t> m;
};

// Direction-number table for dimensions 2..D_max. Dimension 1 is the
// degenerate van der Corput dimension (all m_k = 1) and is implicit.
class DirectionNumberTable {
public:
    // Built-in table covering dimensions up to 64.
    static const DirectionNumberTable& builtin();

    // Validates rows and their invariants; rows[i] describes dimension i+2.
    static DirectionNumberTable from_rows(std::vector<DirectionRow> rows);

    std::size_t max_dimension() const { return rows_.size() + 1; }

    // 32 direction integers for a 1-based dimension; points use 32 output
    // bits (coordinates are exact multiples of 2^-32).
    std::array<std::uint32_t, 32> directions(std::size_t dim) const;

private:
    std::vector<DirectionRow> rows_;
};

// Fixed set of n target points in (0,1]^d, the discrete image of the
// empirical rank map.
struct TargetPointSet {
    Matrix points;  // n x d
    Generator generator = Generator::sobol;
};

// Points 1..n of the Gray-code-ordered Sobol' sequence (index 0, the
// origin, is skipped so the set stays inside (0,1]^d).
TargetPointSet sobol_points(std::size_t n, std::size_t d,
                            const DirectionNumberTable& table = DirectionNumberTable::builtin());

// {1/n, 2/n, ..., n/n}, the one-dimensional target set.
TargetPointSet grid1d(std::size_t n);

// grid1d for d == 1, Sobol' otherwise.
TargetPointSet targets_for(std::size_t n, std::size_t d,
                           const DirectionNumberTable& table = DirectionNumberTable::builtin());

// Parses the Joe-Kuo "new-joe-kuo-6" text layout: a header line followed
// by rows "d s a m_1 ... m_s" for contiguous dimensions starting at 2.
DirectionNumberTable load_direction_numbers(std::istream& in);
DirectionNumberTable load_direction_numbers_file(const std::string& path);

}  // namespace mrdcs::lds
