#include "mgr/util.hpp"

#include <cstdlib>
#include <stdexcept>

#include "mgr/errors.hpp"

namespace mgr {

int table_cap() {
    static const int cap = [] {
        if (const char* env = std::getenv("MGRKIT_TABLE_CAP")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end && *end == '\0' && v > 0 && v <= 1'000'000) return static_cast<int>(v);
            throw InvalidParameter("MGRKIT_TABLE_CAP must be a positive integer <= 1000000");
        }
        return 4096;
    }();
    return cap;
}

long long lex_index(std::span<const int> digits, int radix) {
    long long idx = 0;
    for (int d : digits) {
        if (d < 0 || d >= radix) throw InvalidParameter("digit out of range for lex_index");
        idx = idx * radix + d;
    }
    return idx;
}

std::vector<int> lex_digits(long long index, int radix, int len) {
    std::vector<int> digits(len, 0);
    for (int i = len - 1; i >= 0; --i) {
        digits[i] = static_cast<int>(index % radix);
        index /= radix;
    }
    if (index != 0) throw InvalidParameter("index out of range for lex_digits");
    return digits;
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace mgr
