#include "icsim/gf2k.hpp"

#include <array>
#include <stdexcept>

namespace icsim {

namespace {

// taps[k] = low-order coefficients of an irreducible degree-k polynomial,
// i.e. the polynomial is x^k + taps[k] read as a bit vector.
constexpr std::array<uint64_t, 65> kTaps = []() {
    std::array<uint64_t, 65> t{};
    t[2] = 0x3;        t[3] = 0x3;        t[4] = 0x3;        t[5] = 0x5;
    t[6] = 0x3;        t[7] = 0x3;        t[8] = 0x87;       t[9] = 0x3;
    t[10] = 0x9;       t[11] = 0x5;       t[12] = 0x9;       t[13] = 0x27;
    t[14] = 0x21;      t[15] = 0x3;       t[16] = 0x47;      t[17] = 0x9;
    t[18] = 0x9;       t[19] = 0x27;      t[20] = 0x9;       t[21] = 0x5;
    t[22] = 0x3;       t[23] = 0x21;      t[24] = 0x87;      t[25] = 0x9;
    t[26] = 0x47;      t[27] = 0x27;      t[28] = 0x3;       t[29] = 0x5;
    t[30] = 0x3;       t[31] = 0x9;       t[32] = 0x400007;  t[33] = 0x401;
    t[34] = 0x81;      t[35] = 0x5;       t[36] = 0x201;     t[37] = 0x207;
    t[38] = 0x87;      t[39] = 0x11;      t[40] = 0x8000007; t[41] = 0x9;
    t[42] = 0x81;      t[43] = 0x1007;    t[44] = 0x21;      t[45] = 0x20007;
    t[46] = 0x3;       t[47] = 0x21;      t[48] = 0x20007;   t[49] = 0x201;
    t[50] = 0x207;     t[51] = 0x10000007; t[52] = 0x9;      t[53] = 0x47;
    t[54] = 0x201;     t[55] = 0x81;      t[56] = 0x200007;  t[57] = 0x11;
    t[58] = 0x80001;   t[59] = 0x1000007; t[60] = 0x3;       t[61] = 0x27;
    t[62] = 0x20000001; t[63] = 0x3;      t[64] = 0x807;
    return t;
}();

} // namespace

uint64_t GF2k::taps(int k) {
    if (k < 2 || k > 64) throw std::out_of_range("GF2k: k must be in [2, 64]");
    return kTaps[static_cast<size_t>(k)];
}

GF2k::GF2k(int k) : k_(k), taps_(taps(k)) {
    mask_ = k == 64 ? ~0ULL : (1ULL << k) - 1;
}

uint64_t GF2k::mul(uint64_t a, uint64_t b) const {
    a &= mask_;
    b &= mask_;
    uint64_t res = 0;
    const uint64_t high = 1ULL << (k_ - 1);
    while (b) {
        if (b & 1) res ^= a;
        b >>= 1;
        bool carry = (a & high) != 0;
        a = (a << 1) & mask_;
        if (carry) a ^= taps_;
    }
    return res;
}

uint64_t GF2k::pow(uint64_t a, uint64_t e) const {
    uint64_t res = 1, base = a & mask_;
    while (e) {
        if (e & 1) res = mul(res, base);
        base = mul(base, base);
        e >>= 1;
    }
    return res;
}

uint64_t GF2k::inv(uint64_t a) const {
    if ((a & mask_) == 0) throw std::domain_error("GF2k: zero has no inverse");
    return pow(a, mask_ - 1); // a^(2^k - 2)
}

} // namespace icsim
