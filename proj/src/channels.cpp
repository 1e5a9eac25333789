#include "icsim/channels.hpp"

#include <algorithm>
#include <memory>
#include <json.hpp>

namespace icsim {

std::string sym_name(Sym s) {
    switch (s) {
    case Sym::zero: return "0";
    case Sym::one: return "1";
    case Sym::erased: return "erased";
    case Sym::silence: return "silence";
    }
    return "?";
}

std::string corruption_name(Corruption c) {
    switch (c) {
    case Corruption::none: return "none";
    case Corruption::flip: return "flip";
    case Corruption::erase: return "erase";
    }
    return "?";
}

std::string mchoice_name(MChoice c) {
    switch (c) {
    case MChoice::flip: return "flip";
    case MChoice::erase: return "erase";
    case MChoice::pass: return "pass";
    }
    return "?";
}

MChoice mchoice_parse(const std::string& s) {
    if (s == "flip") return MChoice::flip;
    if (s == "erase") return MChoice::erase;
    if (s == "pass") return MChoice::pass;
    throw std::invalid_argument("unknown channel choice: " + s);
}

std::string NoisePattern::to_json() const {
    nlohmann::json j;
    j["T"] = rounds.size();
    j["rounds"] = rounds;
    nlohmann::json ch = nlohmann::json::object();
    for (const auto& [r, c] : choices) ch[std::to_string(r)] = mchoice_name(c);
    j["choices"] = ch;
    return j.dump();
}

NoisePattern NoisePattern::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    NoisePattern e;
    for (uint64_t r : j.at("rounds")) e.rounds.insert(r);
    if (j.contains("choices"))
        for (auto it = j["choices"].begin(); it != j["choices"].end(); ++it)
            e.choices[std::stoull(it.key())] = mchoice_parse(it.value().get<std::string>());
    if (j.contains("T") && j["T"].get<uint64_t>() != e.rounds.size())
        throw std::invalid_argument("noise pattern: T does not match rounds");
    return e;
}

double UPEFSchedule::p(uint64_t index) const {
    double v = C * static_cast<double>(N) / (static_cast<double>(index) * static_cast<double>(index));
    return std::min(v, 0.5);
}

double schedule_tail_sum(const UPEFSchedule& s, uint64_t horizon) {
    double sum = 0.0;
    for (uint64_t i = 1; i <= horizon; ++i) sum += s.p(i);
    return sum + s.C * static_cast<double>(s.N) / static_cast<double>(horizon);
}

int transmit_uf(int bit, uint64_t index, const NoisePattern& e) {
    return e.contains(index) ? 1 - bit : bit;
}

WireResult transmit_upef(int bit, uint64_t index, const NoisePattern& e, const UPEFSchedule& s,
                         Rng& rng) {
    WireResult r{sym_of_bit(bit), Corruption::none, index};
    if (!e.contains(index)) return r;
    if (rng.bernoulli(s.p(index))) {
        r.value = sym_of_bit(1 - bit);
        r.kind = Corruption::flip;
    } else {
        r.value = Sym::erased;
        r.kind = Corruption::erase;
    }
    return r;
}

WireResult transmit_mupef(int bit, uint64_t index, const NoisePattern& e, MChoice choice, Rng& rng) {
    WireResult r{sym_of_bit(bit), Corruption::none, index};
    if (!e.contains(index)) return r;
    MUPEFParams mp;
    if (rng.bernoulli(mp.p_e)) {
        r.value = Sym::erased;
        r.kind = Corruption::erase;
        return r;
    }
    switch (choice) {
    case MChoice::flip:
        r.value = sym_of_bit(1 - bit);
        r.kind = Corruption::flip;
        break;
    case MChoice::erase:
        r.value = Sym::erased;
        r.kind = Corruption::erase;
        break;
    case MChoice::pass:
        break;
    }
    return r;
}

WireResult UFChannel::send(int bit) {
    ++index_;
    return {sym_of_bit(transmit_uf(bit, index_, e_)),
            e_.contains(index_) ? Corruption::flip : Corruption::none, index_};
}

WireResult UPEFChannel::send(int bit) {
    ++index_;
    return transmit_upef(bit, index_, e_, s_, rng_);
}

WireResult MUPEFChannel::send(int bit) {
    ++index_;
    auto it = e_.choices.find(index_);
    MChoice choice = it == e_.choices.end() ? MChoice::erase : it->second;
    return transmit_mupef(bit, index_, e_, choice, rng_);
}

BitChannel make_clean_bit_channel() {
    auto index = std::make_shared<uint64_t>(0);
    return [index](int bit) {
        return WireResult{sym_of_bit(bit), Corruption::none, ++*index};
    };
}

BitChannel make_uf_bit_channel(NoisePattern e) {
    auto ch = std::make_shared<UFChannel>(std::move(e));
    return [ch](int bit) { return ch->send(bit); };
}

BitChannel make_upef_bit_channel(NoisePattern e, UPEFSchedule s, uint64_t seed) {
    auto ch = std::make_shared<UPEFChannel>(std::move(e), s, seed);
    return [ch](int bit) { return ch->send(bit); };
}

BitChannel make_mupef_bit_channel(NoisePattern e, uint64_t seed) {
    auto ch = std::make_shared<MUPEFChannel>(std::move(e), seed);
    return [ch](int bit) { return ch->send(bit); };
}

IndelExecution run_indel(const Protocol& alt, const Input& x, const Input& y,
                         const std::vector<IndelDelivery>& script) {
    IndelExecution ex;
    const int limit = alt.length;
    for (const auto& d : script) {
        Party sender;
        if (ex.ta.size() % 2 == 0)
            sender = Party::Alice;
        else if (ex.tb.size() % 2 == 1)
            sender = Party::Bob;
        else
            throw std::logic_error("indel script: no party can send");

        Transcript& st = sender == Party::Alice ? ex.ta : ex.tb;
        Transcript& rt = sender == Party::Alice ? ex.tb : ex.ta;
        const Input& in = sender == Party::Alice ? x : y;
        if (static_cast<int>(st.size()) >= limit) break; // sender's protocol is over

        int sent = alt.next_symbol(in, st);
        st.append_sent(sent);

        IndelExecution::Round rec{sender, sent, sent, false};
        switch (d.kind) {
        case IndelDelivery::Kind::clean:
            rt.append_received(sent);
            break;
        case IndelDelivery::Kind::subst:
            rt.append_received(d.value);
            rec.delivered = d.value;
            if (d.value != sent) ++ex.c;
            break;
        case IndelDelivery::Kind::oos:
            st.append_received(d.value);
            rec.delivered = d.value;
            rec.out_of_sync = true;
            ++ex.c;
            break;
        }
        ex.rounds.push_back(rec);
    }
    return ex;
}

IndelExecution run_indel_events(const Protocol& alt, const Input& x, const Input& y,
                                const std::vector<IndelEvent>& events) {
    uint64_t oos = 0;
    for (const auto& e : events)
        if (e.kind == IndelEvent::Kind::out_of_sync) ++oos;
    std::vector<IndelDelivery> script(static_cast<size_t>(alt.length) + oos);
    for (const auto& e : events) {
        if (e.round_index == 0 || e.round_index > script.size())
            throw std::out_of_range("indel event outside the execution");
        auto& slot = script[e.round_index - 1];
        slot.kind = e.kind == IndelEvent::Kind::substitution ? IndelDelivery::Kind::subst
                                                             : IndelDelivery::Kind::oos;
        slot.value = e.injected_symbol;
    }
    IndelExecution ex = run_indel(alt, x, y, script);
    for (const auto& e : events)
        if (e.round_index > ex.rounds.size())
            throw std::out_of_range("indel event after both parties halted");
    return ex;
}

} // namespace icsim
