#include "icsim/robust.hpp"

#include <map>
#include <memory>

namespace icsim {

namespace {

int next_pow2(int v) {
    int p = 2;
    while (p < v) p *= 2;
    return p;
}

// Most frequent value; ties broken toward the value seen latest.
int majority(const std::vector<int>& vals) {
    if (vals.empty()) return 0;
    std::map<int, int> count;
    for (int v : vals) ++count[v];
    int best = vals.back();
    int best_n = count[best];
    for (int i = static_cast<int>(vals.size()) - 1; i >= 0; --i) {
        if (count[vals[i]] > best_n) {
            best = vals[i];
            best_n = count[best];
        }
    }
    return best;
}

// Copies of one party's slot within a block: entries at block_start + offset,
// offset stepping by 2 from `first_off`, bounded by the transcript.
std::vector<int> slot_copies(const Transcript& t, size_t block_start, int first_off, int block_len,
                             size_t limit) {
    std::vector<int> out;
    for (int off = first_off; off < block_len; off += 2) {
        size_t idx = block_start + off;
        if (idx >= t.size() || idx >= limit) break;
        out.push_back(t[idx].symbol);
    }
    return out;
}

} // namespace

IndelRobustProtocol toy_indel_robust(const Protocol& p, int repetition) {
    if (repetition < 1) throw std::invalid_argument("toy_indel_robust: repetition must be >= 1");
    if (!p.alternating()) throw std::invalid_argument("toy_indel_robust: inner protocol must alternate");

    const int R = repetition;
    const int block = 2 * R;
    const int exchanges = (p.length + 1) / 2;

    IndelRobustProtocol rp;
    rp.inner = p;
    rp.repetition = R;
    rp.length_Nprime = block * exchanges;
    rp.alphabet_Sigma_prime = next_pow2(p.alphabet);

    auto inner = std::make_shared<Protocol>(p);

    // Decoded inner-transcript prefix covering the first `exch` full blocks,
    // from the perspective of the party whose own rounds have parity `own`.
    auto inner_prefix = [inner, R, block](const Transcript& t, int exch, Party own) {
        Transcript it;
        for (int e = 0; e < exch; ++e) {
            size_t start = static_cast<size_t>(e) * block;
            int a = majority(slot_copies(t, start, 0, block, t.size()));
            int b = majority(slot_copies(t, start, 1, block, t.size()));
            if (own == Party::Alice)
                it.append_sent(a);
            else
                it.append_received(a);
            if (2 * e + 2 <= inner->length) {
                if (own == Party::Bob)
                    it.append_sent(b);
                else
                    it.append_received(b);
            }
        }
        return it;
    };

    rp.wrapped.length = rp.length_Nprime;
    rp.wrapped.alphabet = rp.alphabet_Sigma_prime;
    rp.wrapped.speaker = alternating_order(rp.length_Nprime);
    rp.wrapped.next_symbol = [inner, inner_prefix, R, block](const Input& in, const Transcript& t) -> int {
        size_t round0 = t.size();
        int e = static_cast<int>(round0) / block;
        int pos = static_cast<int>(round0) % block;
        size_t start = static_cast<size_t>(e) * block;
        if (pos % 2 == 0) {
            if (2 * e + 1 > inner->length) return 0;
            if (pos >= 2) return t[start].symbol; // repeat own first copy
            return inner->next_symbol(in, inner_prefix(t, e, Party::Alice));
        }
        if (2 * e + 2 > inner->length) return 0;
        Transcript it = inner_prefix(t, e, Party::Bob);
        // progressive estimate of Alice's current symbol from copies so far
        it.append_received(majority(slot_copies(t, start, 0, block, round0)));
        return inner->next_symbol(in, it);
    };

    rp.output = [inner, block, exchanges](const Transcript& t) {
        std::vector<int> out;
        for (int e = 0; e < exchanges; ++e) {
            size_t start = static_cast<size_t>(e) * block;
            out.push_back(majority(slot_copies(t, start, 0, block, t.size())));
            if (2 * e + 2 <= inner->length)
                out.push_back(majority(slot_copies(t, start, 1, block, t.size())));
        }
        out.resize(inner->length, 0);
        return out;
    };

    rp.budget_exceeded = [block, exchanges](const Transcript& t) {
        for (int e = 0; e < exchanges; ++e) {
            size_t start = static_cast<size_t>(e) * block;
            for (int first : {0, 1}) {
                std::vector<int> recv;
                for (int off = first; off < block; off += 2) {
                    size_t idx = start + off;
                    if (idx >= t.size()) break;
                    if (!t[idx].sent) recv.push_back(t[idx].symbol);
                }
                for (size_t i = 1; i < recv.size(); ++i)
                    if (recv[i] != recv[0]) return true;
            }
        }
        return false;
    };

    return rp;
}

SubstResilientProtocol make_subst_resilient(const Protocol& p) {
    if (!p.alternating()) throw std::invalid_argument("make_subst_resilient: inner protocol must alternate");
    if (p.alphabet != 2) throw std::invalid_argument("make_subst_resilient: inner protocol must be binary");

    const int block = 8; // 3 data copies + 1 forced one, per party
    const int data_len = 6;
    const int exchanges = (p.length + 1) / 2;

    SubstResilientProtocol sp;
    sp.inner = p;
    sp.length = block * exchanges;

    auto inner = std::make_shared<Protocol>(p);

    auto inner_prefix = [inner, block, data_len](const Transcript& t, int exch, Party own) {
        Transcript it;
        for (int e = 0; e < exch; ++e) {
            size_t start = static_cast<size_t>(e) * block;
            int a = majority(slot_copies(t, start, 0, data_len, t.size()));
            int b = majority(slot_copies(t, start, 1, data_len, t.size()));
            if (own == Party::Alice)
                it.append_sent(a);
            else
                it.append_received(a);
            if (2 * e + 2 <= inner->length) {
                if (own == Party::Bob)
                    it.append_sent(b);
                else
                    it.append_received(b);
            }
        }
        return it;
    };

    sp.wrapped.length = sp.length;
    sp.wrapped.alphabet = 2;
    sp.wrapped.speaker = alternating_order(sp.length);
    sp.wrapped.next_symbol = [inner, inner_prefix, block, data_len](const Input& in,
                                                                    const Transcript& t) -> int {
        size_t round0 = t.size();
        int e = static_cast<int>(round0) / block;
        int pos = static_cast<int>(round0) % block;
        size_t start = static_cast<size_t>(e) * block;
        if (pos >= data_len) return 1; // forced one
        if (pos % 2 == 0) {
            if (2 * e + 1 > inner->length) return 1;
            if (pos >= 2) return t[start].symbol;
            return inner->next_symbol(in, inner_prefix(t, e, Party::Alice));
        }
        if (2 * e + 2 > inner->length) return 1;
        Transcript it = inner_prefix(t, e, Party::Bob);
        it.append_received(majority(slot_copies(t, start, 0, pos, round0)));
        return inner->next_symbol(in, it);
    };

    sp.output = [inner, block, data_len, exchanges](const Transcript& t) {
        std::vector<int> out;
        for (int e = 0; e < exchanges; ++e) {
            size_t start = static_cast<size_t>(e) * block;
            out.push_back(majority(slot_copies(t, start, 0, data_len, t.size())));
            if (2 * e + 2 <= inner->length)
                out.push_back(majority(slot_copies(t, start, 1, data_len, t.size())));
        }
        out.resize(inner->length, 0);
        return out;
    };

    return sp;
}

} // namespace icsim
