#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace commcap {

// Dense 2^n x 2^n work caps out around n = 13 on a desktop (cubic eigensolves).
inline constexpr int kMaxBits = 13;

enum class Family { ip, eq, ne, disj, const0, const1, random };

std::string_view family_name(Family family);
std::optional<Family> family_from_name(std::string_view name);

// Total Boolean function f : {0,1}^n x {0,1}^n -> {0,1}.
// Flat truth table indexed x * 2^n + y; row index x is Alice's input,
// column index y is Bob's.
class BooleanFunction {
public:
    BooleanFunction(int n, std::vector<uint8_t> table);

    int n() const { return n_; }
    int dim() const { return 1 << n_; }  // inputs per side
    uint8_t operator()(int x, int y) const {
        return table_[(static_cast<size_t>(x) << n_) | static_cast<size_t>(y)];
    }
    const std::vector<uint8_t>& table() const { return table_; }

    bool operator==(const BooleanFunction&) const = default;

private:
    int n_;
    std::vector<uint8_t> table_;
};

// M_xy = (-1)^f(x,y).  Entries are exactly +1/-1; same row/column roles
// as BooleanFunction.
class SignMatrix {
public:
    SignMatrix(int n, std::vector<int8_t> entries);

    int n() const { return n_; }
    int dim() const { return 1 << n_; }
    int entry(int x, int y) const {
        return entries_[(static_cast<size_t>(x) << n_) | static_cast<size_t>(y)];
    }
    const int8_t* row(int x) const { return entries_.data() + (static_cast<size_t>(x) << n_); }
    const std::vector<int8_t>& entries() const { return entries_; }

private:
    int n_;
    std::vector<int8_t> entries_;
};

// Built-in families.  `seed` is required exactly when family == random;
// random tables are filled with independent fair bits drawn per table
// index, so equal (n, seed) always gives equal tables.
BooleanFunction make_family(Family family, int n,
                            std::optional<uint64_t> seed = std::nullopt);

SignMatrix sign_matrix(const BooleanFunction& f);

// CCF1 text format:
//   line 1: "CCF1"
//   line 2: decimal n
//   line 3: 2^(2n) characters over {0,1}, row-major (index x*2^n + y)
// LF line endings, trailing newline required, no other whitespace.
BooleanFunction parse_ccf(std::string_view text);
std::string serialize_ccf(const BooleanFunction& f);

}  // namespace commcap
