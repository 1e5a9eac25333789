#include "icsim/trace_lab.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>

namespace icsim {

std::string progress_name(ProgressKind k) {
    switch (k) {
    case ProgressKind::same_progress: return "same_progress";
    case ProgressKind::substitution: return "substitution";
    case ProgressKind::insertion_alice: return "insertion_alice";
    case ProgressKind::insertion_bob: return "insertion_bob";
    case ProgressKind::no_progress: return "no_progress";
    }
    return "?";
}

namespace {

ProgressKind classify_one(const IterationRecord& r) {
    if (r.alice_progress && r.bob_progress) {
        bool same = r.a2b.m_received == r.a2b.m_sent && r.b2a.m_received == r.b2a.m_sent;
        return same ? ProgressKind::same_progress : ProgressKind::substitution;
    }
    if (r.alice_progress) return ProgressKind::insertion_alice;
    if (r.bob_progress) return ProgressKind::insertion_bob;
    return ProgressKind::no_progress;
}

uint64_t iter_flips(const IterationRecord& r) { return r.a2b.flips() + r.b2a.flips(); }

uint64_t iter_corruptions(const IterationRecord& r) {
    return r.a2b.flips() + r.a2b.erasures() + r.b2a.flips() + r.b2a.erasures();
}

bool parity_sync(const IterationRecord& r) { return r.ra_end % 2 == r.rb_end % 2; }

bool has_progress(const IterationRecord& r) { return r.alice_progress || r.bob_progress; }

} // namespace

std::vector<ProgressKind> classify_iterations(const CRTrace& t) {
    std::vector<ProgressKind> out;
    out.reserve(t.iterations.size());
    for (const auto& r : t.iterations) out.push_back(classify_one(r));
    return out;
}

Decomposition decompose(const CRTrace& t) {
    Decomposition d;
    uint64_t j = 0;
    for (size_t i = 0; i < t.iterations.size(); ++i)
        if (t.iterations[i].alice_progress) j = i + 1;
    if (j == 0) {
        d.complete = false;
        d.problems.push_back("trace has no iteration where Alice progresses");
        return d;
    }
    d.analysis_end = j;
    d.iterations.assign(t.iterations.begin(), t.iterations.begin() + j);

    if (!parity_sync(d.iterations.back())) {
        // Alice quit mid-sequence: append one noiseless iteration, analysis
        // only. Bob rejects the fresh parity and replays his stored message,
        // which Alice accepts, closing the sequence with her progress.
        const auto& last = d.iterations.back();
        IterationRecord art;
        art.index = j + 1;
        int mbits = t.k - 1;
        art.a2b.m_sent = 0;
        art.a2b.m_received = 0;
        art.a2b.parity_sent = static_cast<int>((last.ra_end + 1) % 2);
        art.a2b.r_received = art.a2b.parity_sent;
        art.a2b.m_flags.assign(mbits, Corruption::none);
        art.b2a.m_sent = last.b2a.m_sent;
        art.b2a.m_received = art.b2a.m_sent;
        art.b2a.parity_sent = last.b2a.parity_sent;
        art.b2a.r_received = art.b2a.parity_sent;
        art.b2a.m_flags.assign(mbits, Corruption::none);
        art.bob_resent = true;
        art.alice_progress = true;
        art.bob_progress = false;
        art.ra_end = last.ra_end + 1;
        art.rb_end = last.rb_end;
        d.iterations.push_back(art);
        d.artificial_appended = true;
    }

    const uint64_t n = d.iterations.size();
    d.classes.reserve(n);
    for (const auto& r : d.iterations) d.classes.push_back(classify_one(r));

    // sequences tile [1, n]
    uint64_t start = 1;
    for (uint64_t i = 1; i <= n; ++i) {
        if (!parity_sync(d.iterations[i - 1])) continue;
        SequenceSpan s;
        s.first = start;
        s.last = i;
        s.good = d.iterations[i - 1].alice_progress;
        for (uint64_t k = start; k <= i && !s.has_progress; ++k)
            s.has_progress = has_progress(d.iterations[k - 1]);
        d.sequences.push_back(s);
        start = i + 1;
    }
    if (start != n + 1) {
        d.complete = false;
        d.problems.push_back("iterations past the last counter-synchrony point");
    }

    // frames: for each good sequence, extend back over the contiguous bad run
    // to the earliest bad sequence that still has progress
    size_t run_start = 0;
    for (size_t s = 0; s < d.sequences.size(); ++s) {
        if (!d.sequences[s].good) continue;
        size_t fi = s;
        for (size_t b = run_start; b < s; ++b)
            if (d.sequences[b].has_progress) {
                fi = b;
                break;
            }
        FrameSpan fr;
        fr.first = d.sequences[fi].first;
        fr.last = d.sequences[s].last;
        fr.first_seq = fi;
        fr.last_seq = s;
        d.frames.push_back(fr);
        run_start = s + 1;
    }
    if (run_start != d.sequences.size()) {
        d.complete = false;
        d.problems.push_back("bad sequences after the last good sequence");
    }

    // segments: one per Alice-progress iteration
    uint64_t prev_ap = 0;
    for (uint64_t i = 1; i <= n; ++i) {
        if (!d.iterations[i - 1].alice_progress) continue;
        SegmentSpan seg;
        seg.last = i;
        seg.first = i;
        for (uint64_t b = prev_ap + 1; b < i; ++b)
            if (d.iterations[b - 1].bob_progress) {
                seg.first = b;
                break;
            }
        for (uint64_t b = seg.first; b < i; ++b)
            if (d.iterations[b - 1].bob_progress) seg.bob_inserts.push_back(b);
        bool joint = d.iterations[i - 1].bob_progress;
        seg.type = seg.bob_inserts.empty() ? (joint ? 2 : 1) : (joint ? 4 : 3);
        d.segments.push_back(seg);
        prev_ap = i;
    }

    // every progress iteration must fall inside a frame
    for (uint64_t i = 1; i <= n; ++i) {
        if (!has_progress(d.iterations[i - 1])) continue;
        bool inside = false;
        for (const auto& fr : d.frames)
            if (fr.first <= i && i <= fr.last) {
                inside = true;
                break;
            }
        if (!inside) {
            d.complete = false;
            d.problems.push_back("progress at iteration " + std::to_string(i) + " outside any frame");
        }
    }
    return d;
}

ReplayResult build_matching_execution(const CRTrace& t, const IndelRobustProtocol& pi) {
    ReplayResult r;
    Decomposition d = decompose(t);
    if (!d.complete) {
        r.problems = d.problems;
        r.problems.push_back("decomposition incomplete; replay skipped");
        return r;
    }
    for (uint64_t i = 1; i <= d.analysis_end; ++i) r.f += iter_flips(d.iterations[i - 1]);

    const size_t nseg = d.segments.size() - (d.artificial_appended ? 1 : 0);
    std::vector<uint64_t> frame_c(d.frames.size(), 0);
    std::vector<IndelDelivery> script;

    auto frame_of = [&](uint64_t iter) -> size_t {
        for (size_t fi = 0; fi < d.frames.size(); ++fi)
            if (d.frames[fi].first <= iter && iter <= d.frames[fi].last) return fi;
        return d.frames.size();
    };

    for (size_t si = 0; si < nseg; ++si) {
        const auto& seg = d.segments[si];
        const auto& last = d.iterations[seg.last - 1];
        uint64_t c_seg = 0;
        auto deliver = [&](int sent, int recv) {
            IndelDelivery e;
            e.value = recv;
            e.kind = recv != sent ? IndelDelivery::Kind::subst : IndelDelivery::Kind::clean;
            if (recv != sent) ++c_seg;
            script.push_back(e);
        };
        auto inject = [&](int v) {
            script.push_back({IndelDelivery::Kind::oos, v});
            ++c_seg;
        };
        switch (seg.type) {
        case 1:
            inject(last.b2a.m_received);
            break;
        case 2:
            deliver(last.a2b.m_sent, last.a2b.m_received);
            deliver(last.b2a.m_sent, last.b2a.m_received);
            break;
        case 3:
        case 4: {
            const auto& head = d.iterations[seg.bob_inserts.front() - 1];
            deliver(head.a2b.m_sent, head.a2b.m_received);
            for (size_t l = 1; l < seg.bob_inserts.size(); ++l)
                inject(d.iterations[seg.bob_inserts[l] - 1].a2b.m_received);
            if (seg.type == 4) inject(last.a2b.m_received);
            deliver(last.b2a.m_sent, last.b2a.m_received);
            break;
        }
        }
        r.c += c_seg;
        size_t fi = frame_of(seg.last);
        if (fi < frame_c.size()) frame_c[fi] += c_seg;
    }

    r.exec = run_indel(pi.wrapped, t.x, t.y, script);
    if (r.exec.c != r.c)
        r.problems.push_back("replayed edit count disagrees with the constructed script");

    // reference transcripts at the end of Alice's last active iteration
    std::vector<int> ea, eb;
    for (uint64_t i = 1; i <= d.analysis_end; ++i) {
        const auto& it = d.iterations[i - 1];
        if (it.alice_progress) {
            ea.push_back(it.a2b.m_sent);
            ea.push_back(it.b2a.m_received);
        }
        if (it.bob_progress) {
            eb.push_back(it.a2b.m_received);
            eb.push_back(it.b2a.m_sent);
        }
    }
    r.transcripts_match = r.exec.ta.symbols() == ea && r.exec.tb.symbols() == eb;
    if (!r.transcripts_match) r.problems.push_back("replayed transcripts differ from the trace");

    for (size_t fi = 0; fi < d.frames.size(); ++fi) {
        uint64_t ff = 0;
        uint64_t hi = std::min<uint64_t>(d.frames[fi].last, d.analysis_end);
        for (uint64_t i = d.frames[fi].first; i <= hi; ++i) ff += iter_flips(d.iterations[i - 1]);
        if (frame_c[fi] > 2 * ff) {
            r.per_frame_bound = false;
            r.problems.push_back("frame starting at iteration " +
                                 std::to_string(d.frames[fi].first) +
                                 " exceeds twice its flip count");
        }
    }
    return r;
}

LemmaReport check_lemmas(const CRTrace& t) {
    LemmaReport rep;
    auto add = [&rep](const std::string& id, bool pass, std::vector<uint64_t> w = {}) {
        rep.results.push_back({id, pass, std::move(w)});
        rep.all_pass = rep.all_pass && pass;
    };

    // per-iteration growth discipline: counters move with the progress flags
    {
        std::vector<uint64_t> bad;
        uint64_t ra = 0, rb = 0;
        for (const auto& it : t.iterations) {
            if (it.ra_end != ra + (it.alice_progress ? 1 : 0) ||
                it.rb_end != rb + (it.bob_progress ? 1 : 0))
                bad.push_back(it.index);
            ra = it.ra_end;
            rb = it.rb_end;
        }
        add("transcript_growth_0_or_2", bad.empty(), std::move(bad));
    }

    Decomposition d = decompose(t);
    if (!d.complete) {
        add("decomposition_coverage", false);
        return rep;
    }
    add("decomposition_coverage", true);

    const uint64_t n_real = d.analysis_end;
    uint64_t no_prog = 0, prog = 0, corruptions = 0, flips = 0;
    std::vector<uint64_t> uncorrupted_stalls;
    for (uint64_t i = 1; i <= n_real; ++i) {
        const auto& it = d.iterations[i - 1];
        uint64_t cor = iter_corruptions(it);
        corruptions += cor;
        flips += iter_flips(it);
        if (has_progress(it)) {
            ++prog;
        } else {
            ++no_prog;
            if (cor == 0) uncorrupted_stalls.push_back(i);
        }
    }
    add("no_progress_has_corruption", uncorrupted_stalls.empty(), uncorrupted_stalls);

    bool budget_ok = no_prog <= corruptions;
    if (!t.pattern_json.empty()) {
        uint64_t T = NoisePattern::from_json(t.pattern_json).budget_T();
        budget_ok = budget_ok && no_prog <= T;
    }
    add("no_progress_within_budget", budget_ok);

    add("progress_within_budget", prog <= static_cast<uint64_t>(t.Nprime) + 2 * flips);

    // each progress iteration covered by exactly one segment
    {
        std::vector<uint64_t> bad;
        std::multiset<uint64_t> covered;
        for (const auto& seg : d.segments) {
            for (uint64_t b : seg.bob_inserts) covered.insert(b);
            covered.insert(seg.last);
        }
        for (uint64_t i = 1; i <= d.iterations.size(); ++i)
            if (has_progress(d.iterations[i - 1]) != (covered.count(i) == 1))
                bad.push_back(i);
        for (uint64_t i : covered)
            if (covered.count(i) > 1) {
                bad.push_back(i);
                break;
            }
        add("segment_coverage", bad.empty(), std::move(bad));
    }

    // segment position and crossing constraints
    {
        std::vector<uint64_t> bad;
        // group segments by frame
        std::vector<std::vector<size_t>> by_frame(d.frames.size());
        for (size_t si = 0; si < d.segments.size(); ++si) {
            const auto& seg = d.segments[si];
            bool placed = false;
            for (size_t fi = 0; fi < d.frames.size(); ++fi) {
                if (d.frames[fi].first <= seg.last && seg.last <= d.frames[fi].last) {
                    by_frame[fi].push_back(si);
                    if (seg.first < d.frames[fi].first) bad.push_back(seg.first); // crossing
                    placed = true;
                    break;
                }
            }
            if (!placed) bad.push_back(seg.last);
        }
        for (size_t fi = 0; fi < by_frame.size(); ++fi) {
            const auto& segs = by_frame[fi];
            for (size_t pos = 0; pos < segs.size(); ++pos) {
                const auto& seg = d.segments[segs[pos]];
                bool first = pos == 0, last = pos + 1 == segs.size();
                if (seg.type == 1 && (segs.size() < 2 || (!first && !last)))
                    bad.push_back(seg.last);
                if (seg.type == 2) {
                    bool sole = segs.size() == 1 && d.frames[fi].first == d.frames[fi].last;
                    bool middle = !first && !last;
                    if (!sole && !middle) bad.push_back(seg.last);
                }
            }
        }
        add("segment_positions", bad.empty(), std::move(bad));
    }

    // per-sequence structure
    {
        std::vector<uint64_t> bad;
        for (const auto& s : d.sequences) {
            if (s.first == s.last) {
                const auto& it = d.iterations[s.first - 1];
                ProgressKind c = d.classes[s.first - 1];
                if (c == ProgressKind::insertion_alice || c == ProgressKind::insertion_bob)
                    bad.push_back(s.first);
                if (c == ProgressKind::substitution && iter_flips(it) == 0) bad.push_back(s.first);
                continue;
            }
            ProgressKind cf = d.classes[s.first - 1];
            if (cf != ProgressKind::insertion_alice && cf != ProgressKind::insertion_bob)
                bad.push_back(s.first);
            else if (iter_corruptions(d.iterations[s.first - 1]) == 0)
                bad.push_back(s.first);
            else if (d.iterations[s.first - 1].a2b.r_flag != Corruption::flip &&
                     d.iterations[s.first - 1].b2a.r_flag != Corruption::flip &&
                     cf != ProgressKind::insertion_bob)
                bad.push_back(s.first);
            ProgressKind cl = d.classes[s.last - 1];
            if (cl != ProgressKind::insertion_alice && cl != ProgressKind::insertion_bob)
                bad.push_back(s.last);
            else if (d.iterations[s.last - 1].a2b.r_flag != Corruption::flip &&
                     d.iterations[s.last - 1].b2a.r_flag != Corruption::flip &&
                     cl != ProgressKind::insertion_alice)
                bad.push_back(s.last);
            for (uint64_t k = s.first + 1; k < s.last; ++k) {
                const auto& it = d.iterations[k - 1];
                ProgressKind c = d.classes[k - 1];
                if (c == ProgressKind::insertion_alice || c == ProgressKind::insertion_bob)
                    bad.push_back(k);
                else if (iter_corruptions(it) == 0)
                    bad.push_back(k);
                else if (c != ProgressKind::no_progress &&
                         (it.a2b.r_flag != Corruption::flip || it.b2a.r_flag != Corruption::flip))
                    bad.push_back(k);
            }
        }
        add("sequence_structure", bad.empty(), std::move(bad));
    }

    return rep;
}

std::string LemmaReport::to_json() const {
    nlohmann::json out;
    out["all_pass"] = all_pass;
    out["results"] = nlohmann::json::array();
    for (const auto& r : results)
        out["results"].push_back({{"lemma_id", r.lemma_id},
                                  {"pass", r.pass},
                                  {"witness_iterations", r.witness_iterations}});
    return out.dump();
}

IndelRobustProtocol rebuild_protocol(const CRTrace& t) {
    return toy_indel_robust(make_random_protocol(t.inner_seed, t.inner_n, t.inner_alphabet),
                            t.repetition);
}

} // namespace icsim
