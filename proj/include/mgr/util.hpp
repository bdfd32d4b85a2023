#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mgr {

/// Square lookup table over {0..n-1} x {0..n-1}, stored row-major.
class SquareTable {
public:
    SquareTable() = default;
    SquareTable(int n, int fill = 0) : n_(n), cells_(static_cast<std::size_t>(n) * n, fill) {}

    int size() const { return n_; }
    int at(int x, int y) const { return cells_[static_cast<std::size_t>(x) * n_ + y]; }
    void set(int x, int y, int v) { cells_[static_cast<std::size_t>(x) * n_ + y] = v; }

    bool operator==(const SquareTable&) const = default;

private:
    int n_ = 0;
    std::vector<std::int32_t> cells_;
};

/// Maximum element count for materialized operation tables. Defaults to 4096;
/// the MGRKIT_TABLE_CAP environment variable overrides it.
int table_cap();

/// Index of a digit tuple under lexicographic enumeration (first digit most
/// significant), all digits in {0..radix-1}.
long long lex_index(std::span<const int> digits, int radix);

/// Inverse of lex_index: the `len` digits of `index` in base `radix`.
std::vector<int> lex_digits(long long index, int radix, int len);

/// FNV-1a 64-bit digest of a byte string, as "fnv1a64:<16 hex digits>".
std::string fnv1a64_hex(const std::string& bytes);

} // namespace mgr
