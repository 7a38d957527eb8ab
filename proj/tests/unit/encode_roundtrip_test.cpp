#include "aascan/synth.hpp"

#include "aascan/decode.hpp"

#include <doctest.h>

#include <random>

using namespace aascan;
using synth::encode_swap;

namespace {

Address rand_addr(std::mt19937_64& rng) {
    Address a;
    for (auto& b : a.bytes) b = static_cast<uint8_t>(rng());
    if (a.is_zero()) a.bytes[19] = 1;
    return a;
}

BigInt rand_amount(std::mt19937_64& rng, uint32_t max_pow10) {
    // magnitudes spread across the whole range, not clustered at the top
    const uint32_t digits = rng() % (max_pow10 + 1);
    BigInt v = 0;
    for (uint32_t i = 0; i < digits; ++i) v = v * 10 + rng() % 10;
    return v;
}

PoolMeta rand_meta(std::mt19937_64& rng, Protocol protocol) {
    PoolMeta m;
    m.pool = rand_addr(rng);
    m.protocol = protocol;
    m.tokens = {rand_addr(rng), rand_addr(rng)};
    while (m.tokens[1] == m.tokens[0]) m.tokens[1] = rand_addr(rng);
    m.decimals = {static_cast<uint32_t>(rng() % 19), static_cast<uint32_t>(rng() % 19)};
    return m;
}

SwapEvent rand_swap(std::mt19937_64& rng, const PoolMeta& m, uint32_t index) {
    SwapEvent s;
    s.pool = m.pool;
    s.protocol = m.protocol;
    const bool zero_to_one = rng() % 2 == 0;
    s.token_in = zero_to_one ? m.tokens[0] : m.tokens[1];
    s.token_out = zero_to_one ? m.tokens[1] : m.tokens[0];
    const uint32_t dec_in = zero_to_one ? m.decimals[0] : m.decimals[1];
    const uint32_t dec_out = zero_to_one ? m.decimals[1] : m.decimals[0];
    BigInt in = rand_amount(rng, 24);
    BigInt out = rand_amount(rng, 24);
    if (m.protocol == Protocol::UniV2) {
        // v2 events always carry both sides
        if (in == 0) in = 1;
        if (out == 0) out = 1;
    } else if (in == 0 && out == 0) {
        out = 1;
    }
    s.amount_in = TokenAmount{in, dec_in};
    s.amount_out = TokenAmount{out, dec_out};
    s.recipient = m.protocol == Protocol::BalancerV2 ? Address{} : rand_addr(rng);
    s.log_index = index;
    s.tx_hash = Hash32{};
    return s;
}

SwapEvent decode_back(const RawLog& log, const PoolMeta& m) {
    switch (m.protocol) {
        case Protocol::UniV2: return decode_v2_swap(log, m);
        case Protocol::UniV3: return decode_v3_swap(log, m);
        case Protocol::Algebra: return decode_algebra_swap(log, m);
        case Protocol::BalancerV2: {
            const PoolMeta& meta = m;
            return decode_balancer_swap(log, Hash32{},
                                        [&meta](const Address& t) -> std::optional<uint32_t> {
                                            for (size_t i = 0; i < meta.tokens.size(); ++i)
                                                if (meta.tokens[i] == t) return meta.decimals[i];
                                            return std::nullopt;
                                        });
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("encode/decode identity holds across protocols") {
    std::mt19937_64 rng(0x5eed);
    for (Protocol protocol : {Protocol::UniV2, Protocol::UniV3, Protocol::Algebra,
                              Protocol::BalancerV2}) {
        CAPTURE(protocol_to_string(protocol));
        for (int i = 0; i < 250; ++i) {
            const PoolMeta meta = rand_meta(rng, protocol);
            const SwapEvent original = rand_swap(rng, meta, static_cast<uint32_t>(i));
            const RawLog log = encode_swap(original, meta);
            const SwapEvent decoded = decode_back(log, meta);
            REQUIRE(decoded == original);
        }
    }
}

TEST_CASE("encode refuses swaps the protocol cannot express") {
    std::mt19937_64 rng(9);
    const PoolMeta meta = rand_meta(rng, Protocol::UniV2);

    SwapEvent foreign = rand_swap(rng, meta, 0);
    foreign.token_in = rand_addr(rng);  // not a pool token
    CHECK_THROWS_AS(encode_swap(foreign, meta), synth::UnencodableError);

    SwapEvent same = rand_swap(rng, meta, 0);
    same.token_out = same.token_in;
    CHECK_THROWS_AS(encode_swap(same, meta), synth::UnencodableError);

    SwapEvent zero_in = rand_swap(rng, meta, 0);
    zero_in.amount_in.raw = 0;
    CHECK_THROWS_AS(encode_swap(zero_in, meta), synth::UnencodableError);  // v2 needs both sides

    const PoolMeta v3 = rand_meta(rng, Protocol::UniV3);
    SwapEvent both_zero = rand_swap(rng, v3, 0);
    both_zero.amount_in.raw = 0;
    both_zero.amount_out.raw = 0;
    CHECK_THROWS_AS(encode_swap(both_zero, v3), synth::UnencodableError);

    const PoolMeta bal = rand_meta(rng, Protocol::BalancerV2);
    SwapEvent routed = rand_swap(rng, bal, 0);
    routed.recipient = rand_addr(rng);  // vault events carry no recipient
    CHECK_THROWS_AS(encode_swap(routed, bal), synth::UnencodableError);
}

TEST_CASE("encoded log classifies as its own protocol") {
    std::mt19937_64 rng(21);
    for (Protocol protocol : {Protocol::UniV2, Protocol::UniV3, Protocol::Algebra,
                              Protocol::BalancerV2}) {
        const PoolMeta meta = rand_meta(rng, protocol);
        const RawLog log = encode_swap(rand_swap(rng, meta, 0), meta);
        CHECK(classify_log(log) == protocol);
    }
}
