#pragma once

#include "icsim/gf2k.hpp"
#include "icsim/rng.hpp"

#include <optional>
#include <string>
#include <vector>

namespace icsim {

// Manipulation-detecting codec over GF(2^k): a k-bit payload s becomes the
// 3k-bit word (s, x, x^3 + s*x) with x uniform. Any fixed nonzero XOR offset
// survives decoding undetected with probability at most 2/2^k over x.
class AMDCodec {
public:
    explicit AMDCodec(int k);

    int k() const { return field_.k(); }
    int codeword_bits() const { return 3 * field_.k(); }

    struct Word {
        uint64_t s = 0;
        uint64_t x = 0;
        uint64_t tag = 0;
    };

    uint64_t tag(uint64_t s, uint64_t x) const;

    Word encode(uint64_t s, Rng& rng) const;
    std::optional<uint64_t> decode(const Word& w) const;

    // Single-bit payload: b sits in the lowest bit of s, padded with a
    // uniform (k-1)-bit prefix so every codeword prefix keeps entropy.
    Word encode_bit(int b, Rng& rng) const;
    std::optional<int> decode_bit(const Word& w) const;

    // Wire layout: s, x, tag, each k bits most significant first.
    std::vector<int> to_bits(const Word& w) const;
    Word from_bits(const std::vector<int>& bits) const;

private:
    GF2k field_;
};

// k for a target undetected-manipulation probability p.
int amd_k_for(double p);

// Cross-implementation vector: {"k":..,"s_hex":..,"x_hex":..,"codeword_hex":..,"tag_hex":..}
std::string amd_test_vector_json(int k, uint64_t s, uint64_t x);

} // namespace icsim
