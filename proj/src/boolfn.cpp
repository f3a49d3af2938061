#include "commcap/boolfn.hpp"

#include <bit>
#include <charconv>
#include <stdexcept>

#include "commcap/rng.hpp"

namespace commcap {

namespace {

constexpr uint64_t kTableStream = 0x7462697473ull;  // random truth-table bits

void check_n(int n) {
    if (n < 1 || n > kMaxBits) {
        throw std::invalid_argument("n must be in [1, " + std::to_string(kMaxBits) +
                                    "], got " + std::to_string(n));
    }
}

}  // namespace

std::string_view family_name(Family family) {
    switch (family) {
        case Family::ip: return "ip";
        case Family::eq: return "eq";
        case Family::ne: return "ne";
        case Family::disj: return "disj";
        case Family::const0: return "const0";
        case Family::const1: return "const1";
        case Family::random: return "random";
    }
    return "?";
}

std::optional<Family> family_from_name(std::string_view name) {
    for (Family f : {Family::ip, Family::eq, Family::ne, Family::disj, Family::const0,
                     Family::const1, Family::random}) {
        if (name == family_name(f)) return f;
    }
    return std::nullopt;
}

BooleanFunction::BooleanFunction(int n, std::vector<uint8_t> table)
    : n_(n), table_(std::move(table)) {
    check_n(n);
    size_t want = size_t{1} << (2 * n);
    if (table_.size() != want) {
        throw std::invalid_argument("truth table has " + std::to_string(table_.size()) +
                                    " entries, expected " + std::to_string(want));
    }
    for (uint8_t v : table_) {
        if (v > 1) throw std::invalid_argument("truth table entries must be 0 or 1");
    }
}

SignMatrix::SignMatrix(int n, std::vector<int8_t> entries)
    : n_(n), entries_(std::move(entries)) {
    check_n(n);
    size_t want = size_t{1} << (2 * n);
    if (entries_.size() != want) {
        throw std::invalid_argument("sign matrix has " + std::to_string(entries_.size()) +
                                    " entries, expected " + std::to_string(want));
    }
    for (int8_t v : entries_) {
        if (v != 1 && v != -1) throw std::invalid_argument("sign matrix entries must be +1 or -1");
    }
}

BooleanFunction make_family(Family family, int n, std::optional<uint64_t> seed) {
    check_n(n);
    if (family == Family::random && !seed.has_value()) {
        throw std::invalid_argument("random family requires a seed");
    }
    int dim = 1 << n;
    std::vector<uint8_t> table(size_t{1} << (2 * n));
    for (int x = 0; x < dim; ++x) {
        for (int y = 0; y < dim; ++y) {
            size_t idx = (static_cast<size_t>(x) << n) | static_cast<size_t>(y);
            uint8_t v = 0;
            switch (family) {
                case Family::ip:
                    v = static_cast<uint8_t>(std::popcount(static_cast<unsigned>(x & y)) & 1);
                    break;
                case Family::eq: v = x == y; break;
                case Family::ne: v = x != y; break;
                case Family::disj: v = (x & y) == 0; break;
                case Family::const0: v = 0; break;
                case Family::const1: v = 1; break;
                case Family::random:
                    v = static_cast<uint8_t>(counter_rand(*seed, kTableStream, idx) & 1);
                    break;
            }
            table[idx] = v;
        }
    }
    return BooleanFunction(n, std::move(table));
}

SignMatrix sign_matrix(const BooleanFunction& f) {
    std::vector<int8_t> entries(f.table().size());
    for (size_t i = 0; i < entries.size(); ++i) {
        entries[i] = f.table()[i] ? -1 : 1;
    }
    return SignMatrix(f.n(), std::move(entries));
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw std::invalid_argument("ccf parse error: line " + std::to_string(line) + ": " + what);
}

}  // namespace

BooleanFunction parse_ccf(std::string_view text) {
    size_t nl1 = text.find('\n');
    if (nl1 == std::string_view::npos || text.substr(0, nl1) != "CCF1") {
        parse_fail(1, "bad magic, expected \"CCF1\"");
    }
    std::string_view rest = text.substr(nl1 + 1);

    size_t nl2 = rest.find('\n');
    if (nl2 == std::string_view::npos) parse_fail(2, "missing n");
    std::string_view n_text = rest.substr(0, nl2);
    int n = 0;
    auto [ptr, ec] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
    if (ec != std::errc{} || ptr != n_text.data() + n_text.size()) {
        parse_fail(2, "n is not a decimal integer");
    }
    if (n < 1 || n > kMaxBits) parse_fail(2, "n out of range [1, " + std::to_string(kMaxBits) + "]");
    std::string_view payload_line = rest.substr(nl2 + 1);

    size_t nl3 = payload_line.find('\n');
    if (nl3 == std::string_view::npos) parse_fail(3, "missing trailing newline");
    if (nl3 + 1 != payload_line.size()) parse_fail(4, "unexpected content after payload");
    std::string_view payload = payload_line.substr(0, nl3);
    size_t want = size_t{1} << (2 * n);
    if (payload.size() != want) {
        parse_fail(3, "payload length " + std::to_string(payload.size()) + ", expected " +
                          std::to_string(want));
    }
    std::vector<uint8_t> table(want);
    for (size_t i = 0; i < want; ++i) {
        char c = payload[i];
        if (c != '0' && c != '1') {
            parse_fail(3, "offset " + std::to_string(i) + ": expected '0' or '1'");
        }
        table[i] = static_cast<uint8_t>(c - '0');
    }
    return BooleanFunction(n, std::move(table));
}

std::string serialize_ccf(const BooleanFunction& f) {
    std::string out = "CCF1\n";
    out += std::to_string(f.n());
    out += '\n';
    out.reserve(out.size() + f.table().size() + 1);
    for (uint8_t v : f.table()) out += static_cast<char>('0' + v);
    out += '\n';
    return out;
}

}  // namespace commcap
