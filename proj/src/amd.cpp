#include "icsim/amd.hpp"

#include <cmath>
#include <json.hpp>
#include <stdexcept>

namespace icsim {

AMDCodec::AMDCodec(int k) : field_(k) {
    if (k < 2) throw std::invalid_argument("AMDCodec: k must be at least 2");
}

uint64_t AMDCodec::tag(uint64_t s, uint64_t x) const {
    uint64_t x2 = field_.mul(x, x);
    return field_.add(field_.mul(x2, x), field_.mul(s, x));
}

AMDCodec::Word AMDCodec::encode(uint64_t s, Rng& rng) const {
    if ((s & ~field_.mask()) != 0) throw std::invalid_argument("AMDCodec: payload exceeds k bits");
    Word w;
    w.s = s;
    w.x = rng.next_u64() & field_.mask();
    w.tag = tag(w.s, w.x);
    return w;
}

std::optional<uint64_t> AMDCodec::decode(const Word& w) const {
    if (tag(w.s, w.x) != w.tag) return std::nullopt;
    return w.s;
}

AMDCodec::Word AMDCodec::encode_bit(int b, Rng& rng) const {
    uint64_t pad = rng.next_u64() & (field_.mask() >> 1);
    return encode((pad << 1) | static_cast<uint64_t>(b & 1), rng);
}

std::optional<int> AMDCodec::decode_bit(const Word& w) const {
    auto s = decode(w);
    if (!s) return std::nullopt;
    return static_cast<int>(*s & 1);
}

std::vector<int> AMDCodec::to_bits(const Word& w) const {
    std::vector<int> bits;
    bits.reserve(static_cast<size_t>(codeword_bits()));
    for (uint64_t field : {w.s, w.x, w.tag})
        for (int b = field_.k() - 1; b >= 0; --b)
            bits.push_back(static_cast<int>((field >> b) & 1));
    return bits;
}

AMDCodec::Word AMDCodec::from_bits(const std::vector<int>& bits) const {
    if (bits.size() != static_cast<size_t>(codeword_bits()))
        throw std::invalid_argument("AMDCodec: wrong codeword length");
    uint64_t fields[3] = {0, 0, 0};
    size_t pos = 0;
    for (auto& f : fields)
        for (int b = 0; b < field_.k(); ++b) f = (f << 1) | static_cast<uint64_t>(bits[pos++] & 1);
    return Word{fields[0], fields[1], fields[2]};
}

int amd_k_for(double p) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("amd_k_for: p must be in (0, 1)");
    return static_cast<int>(std::ceil(std::log2(1.0 / p))) + 1;
}

namespace {

std::string hex_of_bits(const std::vector<int>& bits) {
    std::string out;
    size_t lead = (4 - bits.size() % 4) % 4;
    int nib = 0, have = static_cast<int>(lead);
    for (int b : bits) {
        nib = (nib << 1) | b;
        if (++have == 4) {
            out += "0123456789abcdef"[nib];
            nib = 0;
            have = 0;
        }
    }
    return out;
}

std::string hex_of(uint64_t v, int k) {
    std::vector<int> bits;
    for (int b = k - 1; b >= 0; --b) bits.push_back(static_cast<int>((v >> b) & 1));
    return hex_of_bits(bits);
}

} // namespace

std::string amd_test_vector_json(int k, uint64_t s, uint64_t x) {
    AMDCodec codec(k);
    AMDCodec::Word w{s, x, codec.tag(s, x)};
    nlohmann::json j{{"k", k},
                     {"s_hex", hex_of(w.s, k)},
                     {"x_hex", hex_of(w.x, k)},
                     {"codeword_hex", hex_of_bits(codec.to_bits(w))},
                     {"tag_hex", hex_of(w.tag, k)}};
    return j.dump();
}

} // namespace icsim
