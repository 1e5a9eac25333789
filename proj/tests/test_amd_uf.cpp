#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "icsim/amd.hpp"
#include "icsim/gf2k.hpp"
#include "icsim/uf_compile.hpp"

#include <cmath>

using namespace icsim;

TEST_CASE("field axioms hold on sampled triples") {
    for (int k : {2, 4, 8, 16, 32, 64}) {
        GF2k f(k);
        Rng rng(static_cast<uint64_t>(k) * 17);
        for (int i = 0; i < 200; ++i) {
            uint64_t a = rng.next_u64() & f.mask();
            uint64_t b = rng.next_u64() & f.mask();
            uint64_t c = rng.next_u64() & f.mask();
            CHECK(f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c));
            CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
            CHECK(f.mul(a, 1) == a);
            if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
        }
    }
    CHECK_THROWS_AS(GF2k(1), std::out_of_range);
    CHECK_THROWS_AS(GF2k(65), std::out_of_range);
}

TEST_CASE("codec round-trips for words and single bits") {
    for (int k : {2, 4, 8, 16}) {
        AMDCodec codec(k);
        Rng rng(static_cast<uint64_t>(k));
        uint64_t mask = k == 64 ? ~0ULL : (1ULL << k) - 1;
        for (int i = 0; i < 1000; ++i) {
            uint64_t s = rng.next_u64() & mask;
            AMDCodec::Word w = codec.encode(s, rng);
            auto dec = codec.decode(w);
            REQUIRE(dec);
            CHECK(*dec == s);
            int b = static_cast<int>(rng.below(2));
            auto bd = codec.decode_bit(codec.encode_bit(b, rng));
            REQUIRE(bd);
            CHECK(*bd == b);
        }
    }
}

TEST_CASE("bit layout survives the wire round-trip") {
    AMDCodec codec(8);
    Rng rng(3);
    AMDCodec::Word w = codec.encode(0xA5, rng);
    std::vector<int> bits = codec.to_bits(w);
    REQUIRE(bits.size() == 24);
    AMDCodec::Word back = codec.from_bits(bits);
    CHECK(back.s == w.s);
    CHECK(back.x == w.x);
    CHECK(back.tag == w.tag);
    CHECK_THROWS_AS(codec.from_bits(std::vector<int>(23)), std::invalid_argument);
}

TEST_CASE("exhaustive k=4 sweep meets the 2/16 miss bound") {
    AMDCodec codec(4);
    int worst = 0;
    for (uint64_t s = 0; s < 16; ++s) {
        for (uint64_t delta = 1; delta < (1ULL << 12); ++delta) {
            uint64_t ds = delta >> 8, dx = (delta >> 4) & 0xF, dt = delta & 0xF;
            int miss = 0;
            for (uint64_t x = 0; x < 16; ++x) {
                AMDCodec::Word w{s ^ ds, x ^ dx, codec.tag(s, x) ^ dt};
                auto dec = codec.decode(w);
                if (dec && *dec != s) ++miss;
            }
            worst = std::max(worst, miss);
        }
    }
    CHECK(worst <= 2);
}

TEST_CASE("zero offset never erases") {
    AMDCodec codec(4);
    Rng rng(1);
    for (uint64_t s = 0; s < 16; ++s)
        for (int i = 0; i < 16; ++i) CHECK(codec.decode(codec.encode(s, rng)));
}

TEST_CASE("k derivation from the target probability") {
    CHECK(amd_k_for(0.5) == 2);
    CHECK(amd_k_for(0.25) == 3);
    CHECK(amd_k_for(1.0 / 1024) == 11);
    CHECK_THROWS_AS(amd_k_for(0.0), std::invalid_argument);
}

TEST_CASE("codeword prefixes keep at least half their bits uniform") {
    const int k = 8;
    AMDCodec codec(k);
    Rng rng(55);
    const int n = 10000;
    std::vector<int> ones(3 * k, 0);
    for (int i = 0; i < n; ++i) {
        std::vector<int> bits = codec.to_bits(codec.encode_bit(0, rng));
        for (size_t p = 0; p < bits.size(); ++p) ones[p] += bits[p];
    }
    for (int kp = 2; kp <= 3 * k; ++kp) {
        int uniform = 0;
        for (int p = 0; p < kp; ++p) {
            double freq = ones[static_cast<size_t>(p)] / double(n);
            if (freq > 0.45 && freq < 0.55) ++uniform;
        }
        CHECK(2 * uniform >= kp);
    }
}

TEST_CASE("test vectors serialize with hex fields") {
    std::string v = amd_test_vector_json(4, 0x5, 0x9);
    CHECK(v.find("\"k\":4") != std::string::npos);
    CHECK(v.find("s_hex") != std::string::npos);
    CHECK(v.find("codeword_hex") != std::string::npos);
}

TEST_CASE("clean compiled channel is transparent and spends 3k_i per round") {
    UPEFSchedule s{1.0 / 297.0, 64};
    auto wire = std::make_shared<uint64_t>(0);
    BitChannel ch = compile_uf_channel({}, s, 9, wire);
    Rng rng(10);
    uint64_t expect = 0;
    for (uint64_t i = 1; i <= 200; ++i) {
        int bit = static_cast<int>(rng.below(2));
        WireResult r = ch(bit);
        CHECK(r.value == sym_of_bit(bit));
        CHECK(r.kind == Corruption::none);
        expect += 3ULL * static_cast<uint64_t>(compiled_k(s, i));
    }
    CHECK(*wire == expect);
    CHECK(compiled_wire_bits(s, 200) == expect);
}

TEST_CASE("flooding a whole codeword flips the bit at most at the scheduled rate") {
    UPEFSchedule s{0.25, 1}; // p(1) = 0.25, k_1 = 3
    REQUIRE(compiled_k(s, 1) == 3);
    const int n = 10000;
    int flips = 0;
    for (int t = 0; t < n; ++t) {
        NoisePattern e;
        for (uint64_t b = 1; b <= 9; ++b) e.rounds.insert(b);
        BitChannel ch = compile_uf_channel(e, s, 1000 + static_cast<uint64_t>(t));
        WireResult r = ch(0);
        CHECK(r.value != Sym::zero); // all bits flipped: never delivered intact
        if (r.value == Sym::one) ++flips;
    }
    double rate = flips / double(n);
    double sigma = std::sqrt(0.25 * 0.75 / n);
    CHECK(rate <= 0.25 + 3 * sigma);
}

TEST_CASE("compiled wire length stays under the closed-form bound") {
    for (uint64_t M : {1000ULL, 10000ULL}) {
        int N = 64;
        UPEFSchedule s{1.0 / 297.0, N};
        double CN = s.C * N;
        double root = std::sqrt(2.0 * CN);
        double bound = 6.0 * double(M) + 3.0 * root +
                       3.0 * (double(M) - root) * std::log2(double(M) * double(M) / CN);
        CHECK(double(compiled_wire_bits(s, M)) <= bound);
    }
}

TEST_CASE("round horizon aborts the compiled channel") {
    UPEFSchedule s{1.0 / 297.0, 64};
    BitChannel ch = compile_uf_channel({}, s, 4, nullptr, 3);
    ch(0);
    ch(1);
    ch(0);
    CHECK_THROWS_AS(ch(1), std::runtime_error);
}

TEST_CASE("pattern lifting lands flips inside the right codeword") {
    UPEFSchedule s{1.0 / 297.0, 64};
    NoisePattern pi;
    pi.rounds = {1, 3};
    NoisePattern wire = lift_pattern_to_wire(pi, s, 77);
    CHECK_FALSE(wire.rounds.empty());
    uint64_t end1 = 3ULL * static_cast<uint64_t>(compiled_k(s, 1));
    uint64_t start3 = end1 + 3ULL * static_cast<uint64_t>(compiled_k(s, 2));
    uint64_t end3 = start3 + 3ULL * static_cast<uint64_t>(compiled_k(s, 3));
    bool in1 = false, in2 = false, in3 = false;
    for (uint64_t b : wire.rounds) {
        if (b <= end1) in1 = true;
        else if (b <= start3) in2 = true;
        else if (b <= end3) in3 = true;
        else FAIL("flip outside any targeted codeword");
    }
    CHECK(in1);
    CHECK_FALSE(in2);
    CHECK(in3);
}

TEST_CASE("window lengths follow ceil(N + 4 log2 i)") {
    CHECK(ZeroRunMonitor::window_len(40, 1) == 40);
    CHECK(ZeroRunMonitor::window_len(40, 2) == 44);
    CHECK(ZeroRunMonitor::window_len(40, 3) == 47); // 40 + 4*1.585 = 46.34
}

TEST_CASE("the zero-run monitor quits on silence but not on live traffic") {
    const int N = 40;
    UPEFSchedule s{1.0 / 297.0, N};

    ZeroRunMonitor live(N);
    Rng rng(2024);
    uint64_t round = 0;
    for (int i = 0; i < 10000 && !live.terminated(); ++i) {
        ++round;
        AMDCodec codec(compiled_k(s, round));
        live.begin_sender_round(round);
        for (int b : codec.to_bits(codec.encode_bit(static_cast<int>(rng.below(2)), rng)))
            live.observe(b);
    }
    CHECK_FALSE(live.terminated());

    ZeroRunMonitor quiet(N);
    quiet.begin_sender_round(1);
    for (int i = 0; i < N; ++i) quiet.observe(0);
    CHECK(quiet.terminated());

    ZeroRunMonitor relaxed(N, true, 0.9);
    relaxed.begin_sender_round(1);
    for (int i = 0; i < N; ++i) relaxed.observe(i % 20 == 0 ? 1 : 0); // 95% zeros
    CHECK(relaxed.terminated());
}
