#include "icsim/scheme_cr.hpp"

#include <json.hpp>
#include <sstream>

namespace icsim {

bool IterationHalf::any_corruption() const {
    if (r_flag != Corruption::none) return true;
    for (auto f : m_flags)
        if (f != Corruption::none) return true;
    return false;
}

uint64_t IterationHalf::flips() const {
    uint64_t n = r_flag == Corruption::flip ? 1 : 0;
    for (auto f : m_flags) n += f == Corruption::flip ? 1 : 0;
    return n;
}

uint64_t IterationHalf::erasures() const {
    uint64_t n = r_flag == Corruption::erase ? 1 : 0;
    for (auto f : m_flags) n += f == Corruption::erase ? 1 : 0;
    return n;
}

int symbol_bits(int alphabet) {
    int b = 1;
    while ((1 << b) < alphabet) ++b;
    return b;
}

namespace {

IterationHalf send_message(const BitChannel& ch, int m, int parity, int mbits) {
    IterationHalf h;
    h.m_sent = m;
    h.parity_sent = parity;
    h.m_flags.reserve(mbits);
    for (int b = mbits - 1; b >= 0; --b) {
        WireResult res = ch((m >> b) & 1);
        h.m_flags.push_back(res.kind);
        if (res.value == Sym::erased)
            h.m_erased = true;
        else
            h.m_received |= bit_of_sym(res.value) << b;
    }
    WireResult res = ch(parity);
    h.r_flag = res.kind;
    if (res.value == Sym::erased)
        h.r_erased = true;
    else
        h.r_received = bit_of_sym(res.value);
    return h;
}

} // namespace

CRTrace run_cr(const IndelRobustProtocol& pi, const Input& x, const Input& y,
               const BitChannel& channel, uint64_t ceiling) {
    const Protocol& w = pi.wrapped;
    const int mbits = symbol_bits(pi.alphabet_Sigma_prime);
    const uint64_t target = static_cast<uint64_t>(pi.length_Nprime) / 2;

    CRTrace trace;
    trace.Nprime = pi.length_Nprime;
    trace.k = mbits + 1;

    Transcript ta, tb;
    uint64_t ra = 0, rb = 0;
    int m_last_m = 0, m_last_r = 0;

    while (ra < target) {
        if (ceiling > 0 && trace.iterations.size() >= ceiling) {
            trace.outcome.aborted = true;
            trace.outcome.abort_reason = "iteration ceiling exceeded";
            break;
        }
        IterationRecord rec;
        rec.index = trace.iterations.size() + 1;

        // Alice's challenge
        ++ra;
        int m_send = w.next_symbol(x, ta);
        ta.append_sent(m_send);
        rec.a2b = send_message(channel, m_send, static_cast<int>(ra % 2), mbits);

        // Bob's side
        bool accept = !rec.a2b.m_erased && !rec.a2b.r_erased &&
                      rec.a2b.r_received != static_cast<int>(rb % 2);
        if (accept) {
            tb.append_received(rec.a2b.m_received);
            ++rb;
            int bm = w.next_symbol(y, tb);
            tb.append_sent(bm);
            m_last_m = bm;
            m_last_r = static_cast<int>(rb % 2);
            rec.bob_progress = true;
        } else {
            rec.bob_resent = true;
        }
        rec.b2a = send_message(channel, m_last_m, m_last_r, mbits);

        // Alice's verdict
        bool keep = !rec.b2a.m_erased && !rec.b2a.r_erased &&
                    rec.b2a.r_received == static_cast<int>(ra % 2);
        if (keep) {
            ta.append_received(rec.b2a.m_received);
            rec.alice_progress = true;
        } else {
            ta.drop_last();
            --ra;
        }

        rec.ra_end = ra;
        rec.rb_end = rb;
        trace.f += rec.a2b.flips() + rec.b2a.flips();
        trace.d += rec.a2b.erasures() + rec.b2a.erasures();
        trace.iterations.push_back(rec);
    }

    trace.outcome.ra = ra;
    trace.outcome.rb = rb;
    trace.outcome.total_bits = 2ULL * static_cast<uint64_t>(trace.k) * trace.iterations.size();
    trace.outcome.alice_output = pi.output(ta);
    trace.outcome.bob_output = pi.output(tb);
    auto [ref_a, ref_b] = run_noiseless(w, x, y);
    trace.outcome.expected_output = pi.output(ref_a);
    trace.outcome.success = !trace.outcome.aborted &&
                            trace.outcome.alice_output == trace.outcome.expected_output &&
                            trace.outcome.bob_output == trace.outcome.expected_output;
    return trace;
}

namespace {

using nlohmann::json;

json half_to_json(const IterationHalf& h) {
    std::vector<int> flags;
    flags.reserve(h.m_flags.size());
    for (auto f : h.m_flags) flags.push_back(static_cast<int>(f));
    return json{{"m", h.m_sent},       {"r", h.parity_sent}, {"m_rx", h.m_received},
                {"r_rx", h.r_received}, {"m_er", h.m_erased}, {"r_er", h.r_erased},
                {"m_fl", flags},        {"r_fl", static_cast<int>(h.r_flag)}};
}

IterationHalf half_from_json(const json& j) {
    IterationHalf h;
    h.m_sent = j.at("m");
    h.parity_sent = j.at("r");
    h.m_received = j.at("m_rx");
    h.r_received = j.at("r_rx");
    h.m_erased = j.at("m_er");
    h.r_erased = j.at("r_er");
    for (int f : j.at("m_fl")) h.m_flags.push_back(static_cast<Corruption>(f));
    h.r_flag = static_cast<Corruption>(j.at("r_fl").get<int>());
    return h;
}

} // namespace

std::string CRTrace::to_jsonl() const {
    std::ostringstream out;
    json meta{{"Nprime", Nprime},
              {"k", k},
              {"f", f},
              {"d", d},
              {"inner_seed", inner_seed},
              {"inner_n", inner_n},
              {"inner_alphabet", inner_alphabet},
              {"repetition", repetition},
              {"x", x},
              {"y", y},
              {"pattern", pattern_json},
              {"outcome",
               json{{"alice_output", outcome.alice_output},
                    {"bob_output", outcome.bob_output},
                    {"expected_output", outcome.expected_output},
                    {"success", outcome.success},
                    {"ra", outcome.ra},
                    {"rb", outcome.rb},
                    {"total_bits", outcome.total_bits},
                    {"aborted", outcome.aborted},
                    {"abort_reason", outcome.abort_reason}}}};
    out << meta.dump() << "\n";
    for (const auto& it : iterations) {
        json j{{"i", it.index},
               {"a2b", half_to_json(it.a2b)},
               {"b2a", half_to_json(it.b2a)},
               {"resent", it.bob_resent},
               {"ap", it.alice_progress},
               {"bp", it.bob_progress},
               {"ra", it.ra_end},
               {"rb", it.rb_end}};
        out << j.dump() << "\n";
    }
    return out.str();
}

CRTrace CRTrace::from_jsonl(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    CRTrace t;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
            if (line_no == 1) {
                t.Nprime = j.at("Nprime");
                t.k = j.at("k");
                t.f = j.at("f");
                t.d = j.at("d");
                t.inner_seed = j.at("inner_seed");
                t.inner_n = j.at("inner_n");
                t.inner_alphabet = j.at("inner_alphabet");
                t.repetition = j.at("repetition");
                t.x = j.at("x").get<Input>();
                t.y = j.at("y").get<Input>();
                t.pattern_json = j.at("pattern");
                const json& o = j.at("outcome");
                t.outcome.alice_output = o.at("alice_output").get<std::vector<int>>();
                t.outcome.bob_output = o.at("bob_output").get<std::vector<int>>();
                t.outcome.expected_output = o.at("expected_output").get<std::vector<int>>();
                t.outcome.success = o.at("success");
                t.outcome.ra = o.at("ra");
                t.outcome.rb = o.at("rb");
                t.outcome.total_bits = o.at("total_bits");
                t.outcome.aborted = o.at("aborted");
                t.outcome.abort_reason = o.at("abort_reason");
            } else {
                IterationRecord rec;
                rec.index = j.at("i");
                rec.a2b = half_from_json(j.at("a2b"));
                rec.b2a = half_from_json(j.at("b2a"));
                rec.bob_resent = j.at("resent");
                rec.alice_progress = j.at("ap");
                rec.bob_progress = j.at("bp");
                rec.ra_end = j.at("ra");
                rec.rb_end = j.at("rb");
                t.iterations.push_back(rec);
            }
        } catch (const json::exception& e) {
            throw std::runtime_error("trace parse error at line " + std::to_string(line_no) + ": " +
                                     e.what());
        }
    }
    if (line_no == 0) throw std::runtime_error("trace parse error: empty input");
    return t;
}

} // namespace icsim
