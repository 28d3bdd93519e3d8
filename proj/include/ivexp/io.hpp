#ifndef IVEXP_IO_HPP
#define IVEXP_IO_HPP

// Text formats. Numbers are parsed with directed rounding so that a parsed
// object always contains the value the text denotes: the nearest double is
// identified with strtod, the side of the true value is decided with an
// 80-bit reparse (decisive whenever the two disagree in extended precision),
// and exact equality is settled by comparing against the exact decimal
// rendering of the candidate. Only when a token lands closer to the
// candidate than extended precision resolves and is not exactly equal do we
// pay one pessimistic outward ulp.

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ivexp/errors.hpp"
#include "ivexp/interval.hpp"
#include "ivexp/interval_matrix.hpp"
#include "ivexp/oracle.hpp"
#include "ivexp/rounding.hpp"

namespace ivexp::io {

enum class Direction { down, up };

namespace detail {

struct Decimal {
    bool negative = false;
    std::string digits; // no leading/trailing zeros unless the value is zero
    long exponent = 0;  // value = digits * 10^(exponent - len(digits)) in magnitude

    bool is_zero() const { return digits.empty(); }
};

// Parse a plain decimal literal (no hex) into a normalized form. Returns
// false on malformed input.
inline bool split_decimal(const std::string& token, Decimal& out) {
    const char* s = token.c_str();
    if (*s == '+' || *s == '-') {
        out.negative = (*s == '-');
        ++s;
    }
    std::string digits;
    long point_shift = 0;
    bool seen_point = false, seen_digit = false;
    for (; *s; ++s) {
        if (*s == '.') {
            if (seen_point) return false;
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(*s))) {
            seen_digit = true;
            digits.push_back(*s);
            if (seen_point) ++point_shift;
        } else {
            break;
        }
    }
    if (!seen_digit) return false;
    long exp10 = 0;
    if (*s == 'e' || *s == 'E') {
        char* end = nullptr;
        exp10 = std::strtol(s + 1, &end, 10);
        if (end == s + 1 || *end) return false;
        s = end;
    } else if (*s) {
        return false;
    }

    // normalize: strip leading zeros, then trailing zeros
    std::size_t first = digits.find_first_not_of('0');
    if (first == std::string::npos) {
        out.digits.clear();
        out.exponent = 0;
        return true;
    }
    std::size_t last = digits.find_last_not_of('0');
    // value = digits-as-integer * 10^(exponent - len(digits))
    out.exponent = static_cast<long>(digits.size()) - static_cast<long>(first) - point_shift + exp10;
    out.digits = digits.substr(first, last - first + 1);
    return true;
}

// Exact decimal of a finite double (every binary64 value has a terminating
// decimal expansion of at most 767 significant digits).
inline Decimal exact_decimal(double d) {
    char buf[816];
    std::snprintf(buf, sizeof buf, "%.*e", 780, d);
    Decimal out;
    if (!split_decimal(buf, out)) throw Error("internal: exact decimal rendering failed");
    return out;
}

// exact numeric order of normalized decimals
inline int compare_decimals(const Decimal& a, const Decimal& b) {
    if (a.is_zero() && b.is_zero()) return 0;
    if (a.is_zero()) return b.negative ? 1 : -1;
    if (b.is_zero()) return a.negative ? -1 : 1;
    if (a.negative != b.negative) return a.negative ? -1 : 1;
    const int sign = a.negative ? -1 : 1;
    if (a.exponent != b.exponent) return a.exponent < b.exponent ? -sign : sign;
    const std::size_t len = std::max(a.digits.size(), b.digits.size());
    std::string da = a.digits, db = b.digits;
    da.resize(len, '0');
    db.resize(len, '0');
    const int cmp = da.compare(db);
    if (cmp == 0) return 0;
    return cmp < 0 ? -sign : sign;
}

inline bool is_hex_token(const std::string& token) {
    const std::size_t off = (!token.empty() && (token[0] == '+' || token[0] == '-')) ? 1 : 0;
    return token.size() > off + 1 && token[off] == '0' &&
           (token[off + 1] == 'x' || token[off + 1] == 'X');
}

inline std::size_t hex_significant_digits(const std::string& token) {
    std::size_t count = 0;
    bool in_mantissa = false, seen_nonzero = false;
    for (const char c : token) {
        if (c == 'x' || c == 'X') {
            in_mantissa = true;
            continue;
        }
        if (!in_mantissa) continue;
        if (c == 'p' || c == 'P') break;
        if (c == '.') continue;
        if (std::isxdigit(static_cast<unsigned char>(c))) {
            if (c != '0') seen_nonzero = true;
            if (seen_nonzero) ++count;
        }
    }
    return count;
}

} // namespace detail

/// Largest (Direction::down) or smallest (Direction::up) double on the
/// corresponding side of the exact value denoted by the token.
inline double parse_directed(const std::string& token, Direction dir) {
    if (token.empty()) throw ParseError("empty numeric token");
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || end == token.c_str())
        throw ParseError("malformed number: '" + token + "'");
    if (std::isnan(d)) throw ParseError("NaN is not a valid bound");

    if (std::isinf(d)) {
        // literal infinity is kept; an overflowing finite literal saturates
        const bool overflow = errno == ERANGE;
        if (!overflow) return d;
        if (dir == Direction::down) return d > 0 ? round::kMaxFinite : d;
        return d > 0 ? d : -round::kMaxFinite;
    }

    errno = 0;
    const long double wide = std::strtold(token.c_str(), &end);
    if (static_cast<long double>(d) != wide) {
        const bool token_above = wide > static_cast<long double>(d);
        if (dir == Direction::down) return token_above ? d : round::next_down(d);
        return token_above ? round::next_up(d) : d;
    }

    // Extended precision cannot separate token and candidate; settle the
    // order against the exact decimal expansion of the candidate.
    if (!detail::is_hex_token(token)) {
        detail::Decimal tok;
        if (detail::split_decimal(token, tok)) {
            const int cmp = detail::compare_decimals(tok, detail::exact_decimal(d));
            if (cmp == 0) return d;
            if (dir == Direction::down) return cmp > 0 ? d : round::next_down(d);
            return cmp > 0 ? round::next_up(d) : d;
        }
    } else if (detail::hex_significant_digits(token) <= 16) {
        return d; // fits 64 mantissa bits: strtold was exact, so token == d
    }
    return dir == Direction::down ? round::next_down(d) : round::next_up(d);
}

/// 17 significant digits: reparses to the identical double.
inline std::string format_double(double d, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, d);
    return buf;
}

/// `sig`-significant-digit decimal rounded toward the requested direction, so
/// a printed interval still encloses the stored one.
inline std::string format_double_directed(double d, int sig, Direction dir) {
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    if (d == 0) return "0";
    detail::Decimal dec = detail::exact_decimal(d);
    std::string digits = dec.digits;
    long exponent = dec.exponent;
    if (static_cast<long>(digits.size()) > sig) {
        bool rest_nonzero = digits.find_first_not_of('0', sig) != std::string::npos;
        digits.resize(sig);
        const bool outward = (dir == Direction::up) != dec.negative;
        if (rest_nonzero && outward) {
            int i = sig - 1;
            for (; i >= 0 && digits[i] == '9'; --i) digits[i] = '0';
            if (i < 0) {
                digits.insert(digits.begin(), '1');
                digits.resize(sig);
                ++exponent;
            } else {
                ++digits[i];
            }
        }
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

    std::string out = dec.negative ? "-" : "";
    if (exponent > 0 && exponent <= sig) {
        // positional: digits then zeros, or a point inside
        if (static_cast<long>(digits.size()) <= exponent) {
            out += digits;
            out.append(exponent - digits.size(), '0');
        } else {
            out += digits.substr(0, exponent) + "." + digits.substr(exponent);
        }
    } else if (exponent <= 0 && exponent > -4) {
        out += "0.";
        out.append(-exponent, '0');
        out += digits;
    } else {
        out += digits.substr(0, 1);
        if (digits.size() > 1) out += "." + digits.substr(1);
        out += "e" + std::to_string(exponent - 1);
    }
    return out;
}

/// Hexadecimal float: exact, so parse_directed reproduces it bit for bit.
inline std::string format_double_hex(double d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", d);
    return buf;
}

inline std::string format_interval(const Interval& v, bool hex = false, int digits = 17) {
    if (hex) return "[" + format_double_hex(v.lo()) + "," + format_double_hex(v.hi()) + "]";
    if (digits >= 17) // full precision round-trips exactly
        return "[" + format_double(v.lo(), digits) + "," + format_double(v.hi(), digits) + "]";
    return "[" + format_double_directed(v.lo(), digits, Direction::down) + "," +
           format_double_directed(v.hi(), digits, Direction::up) + "]";
}

/// Accepts "[lo,hi]" with decimal or hexadecimal bounds; the parsed interval
/// contains the denoted one, with equality for exact (hex) renderings.
inline Interval parse_interval(const std::string& text) {
    std::size_t open = text.find('[');
    std::size_t comma = text.find(',');
    std::size_t close = text.find(']');
    if (open == std::string::npos || comma == std::string::npos || close == std::string::npos ||
        !(open < comma && comma < close))
        throw ParseError("expected '[lo,hi]': '" + text + "'");
    const auto trim = [](std::string s) {
        const std::size_t b = s.find_first_not_of(" \t");
        const std::size_t e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const double lo = parse_directed(trim(text.substr(open + 1, comma - open - 1)), Direction::down);
    const double hi = parse_directed(trim(text.substr(comma + 1, close - comma - 1)), Direction::up);
    if (!(lo <= hi)) throw ParseError("interval bounds out of order: '" + text + "'");
    return {lo, hi};
}

// ---- interval-matrix files ------------------------------------------------------
//
//   rows R
//   cols C
//   lower      (or `entries` for a point matrix, parsed outward both ways)
//   <R*C numbers, row-major>
//   upper
//   <R*C numbers, row-major>
//
// '#' starts a comment; whitespace is free-form.

inline IntervalMatrix read_interval_matrix(std::istream& in) {
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) tokens.push_back(t);
    }
    std::size_t pos = 0;
    const auto next = [&]() -> const std::string& {
        if (pos >= tokens.size()) throw ParseError("unexpected end of matrix file");
        return tokens[pos++];
    };
    const auto read_size = [&](const char* key) -> std::size_t {
        if (next() != key) throw ParseError(std::string("expected '") + key + "'");
        const std::string& v = next();
        char* end = nullptr;
        const long n = std::strtol(v.c_str(), &end, 10);
        if (*end || n <= 0) throw ParseError(std::string("bad ") + key + ": '" + v + "'");
        return static_cast<std::size_t>(n);
    };

    const std::size_t rows = read_size("rows");
    const std::size_t cols = read_size("cols");
    const std::string section = next();

    const auto read_grid = [&](Direction dir) {
        RealMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = parse_directed(next(), dir);
        return m;
    };

    IntervalMatrix out;
    if (section == "lower") {
        const RealMatrix lower = read_grid(Direction::down);
        if (next() != "upper") throw ParseError("expected 'upper' grid after 'lower'");
        const RealMatrix upper = read_grid(Direction::up);
        try {
            out = IntervalMatrix(lower, upper);
        } catch (const DomainError& e) {
            throw ParseError(std::string("lower bound exceeds upper bound: ") + e.what());
        }
    } else if (section == "entries") {
        // a point matrix, rounded outward in both directions
        std::vector<std::string> grid(rows * cols);
        for (auto& t : grid) t = next();
        RealMatrix lower(rows, cols), upper(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                lower(i, j) = parse_directed(grid[i * cols + j], Direction::down);
                upper(i, j) = parse_directed(grid[i * cols + j], Direction::up);
            }
        }
        out = IntervalMatrix(lower, upper);
    } else {
        throw ParseError("expected 'lower' or 'entries', got '" + section + "'");
    }
    if (pos != tokens.size()) throw ParseError("trailing content in matrix file");
    return out;
}

inline void write_interval_matrix(std::ostream& os, const IntervalMatrix& m, int digits = 17) {
    os << "rows " << m.rows() << "\n";
    os << "cols " << m.cols() << "\n";
    os << "lower\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            os << (j ? " " : "") << format_double(m(i, j).lo(), digits);
        os << "\n";
    }
    os << "upper\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            os << (j ? " " : "") << format_double(m(i, j).hi(), digits);
        os << "\n";
    }
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "epsilon,width_horner,width_ss,width_lower_bound\n";
    char buf[160];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17e,%.17e,%.17e,%.17e\n", r.epsilon, r.width_horner,
                      r.width_ss, r.width_lower_bound);
        os << buf;
    }
}

inline std::vector<SweepRow> read_sweep_csv(std::istream& in) {
    std::vector<SweepRow> rows;
    std::string line;
    if (!std::getline(in, line) || line.rfind("epsilon,", 0) != 0)
        throw ParseError("missing sweep CSV header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        SweepRow r;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r.epsilon, &r.width_horner, &r.width_ss,
                        &r.width_lower_bound) != 4)
            throw ParseError("bad sweep CSV row: '" + line + "'");
        rows.push_back(r);
    }
    return rows;
}

} // namespace ivexp::io

#endif
