#pragma once

#include <cstdint>

namespace icsim {

// Binary extension field GF(2^k), 2 <= k <= 64, elements packed into the low
// k bits of a uint64_t. The reduction polynomial for each k is fixed, so
// encodings are bit-exact across builds.
class GF2k {
public:
    explicit GF2k(int k);

    int k() const { return k_; }
    uint64_t mask() const { return mask_; }

    uint64_t add(uint64_t a, uint64_t b) const { return a ^ b; }
    uint64_t mul(uint64_t a, uint64_t b) const;
    uint64_t pow(uint64_t a, uint64_t e) const;
    uint64_t inv(uint64_t a) const; // a != 0

    // Low-order taps of the degree-k reduction polynomial (without x^k).
    static uint64_t taps(int k);

private:
    int k_;
    uint64_t mask_;
    uint64_t taps_;
};

} // namespace icsim
