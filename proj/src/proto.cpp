#include "icsim/proto.hpp"
#include "icsim/rng.hpp"

#include <memory>

namespace icsim {

std::vector<Party> alternating_order(int n) {
    std::vector<Party> s(n);
    for (int r = 1; r <= n; ++r) s[r - 1] = (r % 2 == 1) ? Party::Alice : Party::Bob;
    return s;
}

std::pair<Transcript, Transcript> run_noiseless(const Protocol& p, const Input& x, const Input& y) {
    Transcript ta, tb;
    for (int r = 1; r <= p.length; ++r) {
        if (p.speaker[r - 1] == Party::Alice) {
            int sym = p.next_symbol(x, ta);
            ta.append_sent(sym);
            tb.append_received(sym);
        } else {
            int sym = p.next_symbol(y, tb);
            tb.append_sent(sym);
            ta.append_received(sym);
        }
    }
    return {ta, tb};
}

namespace {

// Greedy slot assignment: original round r lands on the next alternating
// slot whose speaker matches; slots skipped over become padding (-1).
std::vector<int> alternation_map(const Protocol& p) {
    std::vector<int> map; // alt round t-1 -> original round r, or -1
    int t = 0;
    for (int r = 1; r <= p.length; ++r) {
        Party want = p.speaker[r - 1];
        for (;;) {
            ++t;
            Party slot = (t % 2 == 1) ? Party::Alice : Party::Bob;
            if (slot == want) {
                map.push_back(r);
                break;
            }
            map.push_back(-1);
        }
    }
    if (map.size() % 2 == 1) map.push_back(-1); // close the final exchange
    return map;
}

} // namespace

Protocol to_alternating(const Protocol& p) {
    if (p.alternating()) return p;

    auto map = std::make_shared<std::vector<int>>(alternation_map(p));
    auto inner = std::make_shared<Protocol>(p);

    Protocol out;
    out.length = static_cast<int>(map->size());
    out.alphabet = p.alphabet;
    out.speaker = alternating_order(out.length);
    out.next_symbol = [map, inner](const Input& in, const Transcript& t) -> int {
        size_t round = t.size(); // 0-based index of the round being produced
        if (round >= map->size() || (*map)[round] < 0) return 0;
        Transcript stripped;
        for (size_t i = 0; i < t.size(); ++i) {
            if ((*map)[i] < 0) continue;
            if (t[i].sent)
                stripped.append_sent(t[i].symbol);
            else
                stripped.append_received(t[i].symbol);
        }
        return inner->next_symbol(in, stripped);
    };
    return out;
}

std::vector<int> strip_padding(const Protocol& original, const std::vector<int>& alt_symbols) {
    if (original.alternating()) return alt_symbols;
    auto map = alternation_map(original);
    std::vector<int> out;
    for (size_t i = 0; i < alt_symbols.size() && i < map.size(); ++i)
        if (map[i] >= 0) out.push_back(alt_symbols[i]);
    return out;
}

Protocol make_random_protocol(uint64_t seed, int n, int alphabet) {
    if (n < 0) throw std::invalid_argument("make_random_protocol: n must be >= 0");
    if (alphabet < 1) throw std::invalid_argument("make_random_protocol: alphabet must be >= 1");
    Protocol p;
    p.length = n;
    p.alphabet = alphabet;
    p.speaker = alternating_order(n);
    p.next_symbol = [seed, alphabet](const Input& in, const Transcript& t) -> int {
        uint64_t h = mix64(seed, t.size() + 1);
        for (uint8_t b : in) h = mix64(h, b + 1);
        for (size_t i = 0; i < t.size(); ++i) h = mix64(h, static_cast<uint64_t>(t[i].symbol) + 0x100);
        return static_cast<int>(h % static_cast<uint64_t>(alphabet));
    };
    return p;
}

} // namespace icsim
