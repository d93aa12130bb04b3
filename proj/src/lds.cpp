#include "mrdcs/lds.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include "mrdcs/error.hpp"

namespace mrdcs::lds {

namespace {

constexpr unsigned kBits = 32;

void validate_row(const DirectionRow& row, std::size_t dim, int line_no) {
    const auto where = [&](const std::string& msg) {
        std::ostringstream os;
        os << "direction table, dimension " << dim;
        if (line_no >= 0) os << " (line " << line_no << ")";
        os << ": " << msg;
        return os.str();
    };
    if (row.degree == 0 || row.degree > kBits)
        throw ParseError(where("polynomial degree out of range"));
    if (row.m.size() != row.degree)
        throw ParseError(where("expected one m value per polynomial degree"));
    if (row.degree >= 1 && (row.coeffs >> (row.degree - 1)) != 0)
        throw ParseError(where("coefficient bits exceed polynomial degree"));
    for (std::size_t k = 0; k < row.m.size(); ++k) {
        if (row.m[k] % 2 == 0)
            throw ParseError(where("m_" + std::to_string(k + 1) + " must be odd"));
        if (row.m[k] >= (std::uint64_t{1} << (k + 1)))
            throw ParseError(where("m_" + std::to_string(k + 1) + " must be < 2^" +
                                   std::to_string(k + 1)));
    }
}

}  // namespace

DirectionNumberTable DirectionNumberTable::from_rows(std::vector<DirectionRow> rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) validate_row(rows[i], i + 2, -1);
    DirectionNumberTable table;
    table.rows_ = std::move(rows);
    return table;
}

std::array<std::uint32_t, 32> DirectionNumberTable::directions(std::size_t dim) const {
    std::array<std::uint32_t, 32> v{};
    if (dim == 0 || dim > max_dimension())
        throw CapabilityError("dimension " + std::to_string(dim) +
                              " outside direction table (max " +
                              std::to_string(max_dimension()) + ")");
    if (dim == 1) {
        for (unsigned k = 0; k < kBits; ++k) v[k] = std::uint32_t{1} << (kBits - 1 - k);
        return v;
    }
    const DirectionRow& row = rows_[dim - 2];
    const unsigned s = row.degree;
    for (unsigned k = 0; k < s && k < kBits; ++k)
        v[k] = row.m[k] << (kBits - 1 - k);
    // Recurrence past the initial values: v_k = v_{k-s} ^ (v_{k-s} >> s)
    // with the polynomial's middle coefficients mixing in v_{k-1}..v_{k-s+1}.
    for (unsigned k = s; k < kBits; ++k) {
        std::uint32_t value = v[k - s] ^ (v[k - s] >> s);
        for (unsigned i = 1; i < s; ++i)
            if ((row.coeffs >> (s - 1 - i)) & 1u) value ^= v[k - i];
        v[k] = value;
    }
    return v;
}

TargetPointSet sobol_points(std::size_t n, std::size_t d, const DirectionNumberTable& table) {
    if (n < 1) throw DomainError("sobol_points: n must be >= 1");
    if (d < 1) throw DomainError("sobol_points: d must be >= 1");
    if (d > table.max_dimension())
        throw CapabilityError("sobol_points: dimension " + std::to_string(d) +
                              " exceeds table maximum " + std::to_string(table.max_dimension()) +
                              "; load a larger direction-number table");
    if (n >= (std::uint64_t{1} << kBits))
        throw DomainError("sobol_points: n exceeds 32-bit index range");

    std::vector<std::array<std::uint32_t, 32>> dirs;
    dirs.reserve(d);
    for (std::size_t j = 1; j <= d; ++j) dirs.push_back(table.directions(j));

    TargetPointSet out;
    out.generator = Generator::sobol;
    out.points = Matrix(n, d);
    std::vector<std::uint32_t> state(d, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        const unsigned c = static_cast<unsigned>(std::countr_zero(i));
        for (std::size_t j = 0; j < d; ++j) {
            state[j] ^= dirs[j][c];
            out.points(i - 1, j) = static_cast<double>(state[j]) * 0x1.0p-32;
        }
    }
    return out;
}

TargetPointSet grid1d(std::size_t n) {
    if (n < 1) throw DomainError("grid1d: n must be >= 1");
    TargetPointSet out;
    out.generator = Generator::grid1d;
    out.points = Matrix(n, 1);
    for (std::size_t i = 0; i < n; ++i)
        out.points(i, 0) = static_cast<double>(i + 1) / static_cast<double>(n);
    return out;
}

TargetPointSet targets_for(std::size_t n, std::size_t d, const DirectionNumberTable& table) {
    return d == 1 ? grid1d(n) : sobol_points(n, d, table);
}

DirectionNumberTable load_direction_numbers(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("direction table: empty stream (missing header line)");

    std::vector<DirectionRow> rows;
    int line_no = 1;
    std::size_t expected_dim = 2;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        long long dim = 0, degree = 0, coeffs = 0;
        if (!(ls >> dim)) {
            // blank or whitespace-only lines are tolerated
            std::string rest;
            ls.clear();
            if (ls.str().find_first_not_of(" \t\r\n") == std::string::npos) continue;
            throw ParseError("direction table line " + std::to_string(line_no) +
                             ": expected dimension number");
        }
        if (!(ls >> degree >> coeffs) || degree < 1 || coeffs < 0)
            throw ParseError("direction table line " + std::to_string(line_no) +
                             ": malformed row");
        if (static_cast<std::size_t>(dim) != expected_dim)
            throw ParseError("direction table line " + std::to_string(line_no) +
                             ": dimensions must be contiguous starting at 2 (got " +
                             std::to_string(dim) + ", expected " +
                             std::to_string(expected_dim) + ")");
        DirectionRow row;
        row.degree = static_cast<unsigned>(degree);
        row.coeffs = static_cast<std::uint32_t>(coeffs);
        for (long long k = 0; k < degree; ++k) {
            long long mv = 0;
            if (!(ls >> mv) || mv < 0)
                throw ParseError("direction table line " + std::to_string(line_no) +
                                 ": expected " + std::to_string(degree) + " m values");
            row.m.push_back(static_cast<std::uint32_t>(mv));
        }
        long long extra;
        if (ls >> extra)
            throw ParseError("direction table line " + std::to_string(line_no) +
                             ": trailing values after m_" + std::to_string(degree));
        validate_row(row, expected_dim, line_no);
        rows.push_back(std::move(row));
        ++expected_dim;
    }
    return DirectionNumberTable::from_rows(std::move(rows));
}

DirectionNumberTable load_direction_numbers_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open direction-number file: " + path);
    return load_direction_numbers(in);
}

}  // namespace mrdcs::lds
