#include "aascan/decode.hpp"

#include "aascan/abi.hpp"
#include "aascan/keccak.hpp"

#include <doctest.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <thread>
#include <vector>

using namespace aascan;

namespace {

Address addr(uint8_t tag) {
    Address a;
    a.bytes[19] = tag;
    a.bytes[0] = 0xa0;
    return a;
}

Hash32 hash(uint8_t tag) {
    Hash32 h;
    h.bytes[31] = tag;
    return h;
}

PoolMeta pair_meta(Protocol protocol, uint8_t pool_tag = 0x50) {
    PoolMeta m;
    m.pool = addr(pool_tag);
    m.protocol = protocol;
    m.tokens = {addr(1), addr(2)};
    m.decimals = {18, 6};
    return m;
}

RawLog v2_log(const BigInt& a0_in, const BigInt& a1_in, const BigInt& a0_out,
              const BigInt& a1_out, uint8_t pool_tag = 0x50) {
    RawLog log;
    log.emitter = addr(pool_tag);
    log.topics = {swap_topics().uni_v2, abi::word_from_address(addr(0x99)),
                  abi::word_from_address(addr(0x77))};
    abi::append_word(log.data, abi::word_from_uint(a0_in));
    abi::append_word(log.data, abi::word_from_uint(a1_in));
    abi::append_word(log.data, abi::word_from_uint(a0_out));
    abi::append_word(log.data, abi::word_from_uint(a1_out));
    log.log_index = 3;
    return log;
}

RawLog signed_pair_log(Protocol protocol, const BigInt& amount0, const BigInt& amount1,
                       uint8_t pool_tag = 0x50) {
    RawLog log;
    log.emitter = addr(pool_tag);
    const Hash32 topic0 =
        protocol == Protocol::UniV3 ? swap_topics().uni_v3 : swap_topics().algebra;
    log.topics = {topic0, abi::word_from_address(addr(0x99)),
                  abi::word_from_address(addr(0x77))};
    abi::append_word(log.data, abi::word_from_int(amount0));
    abi::append_word(log.data, abi::word_from_int(amount1));
    abi::append_word(log.data, abi::word_from_uint(BigInt(0)));  // price
    abi::append_word(log.data, abi::word_from_uint(BigInt(0)));  // liquidity
    abi::append_word(log.data, abi::word_from_uint(BigInt(0)));  // tick
    if (protocol == Protocol::Algebra)
        abi::append_word(log.data, abi::word_from_uint(BigInt(3000)));  // fee
    log.log_index = 5;
    return log;
}

RawLog balancer_log(const Address& pool, const Address& token_in, const Address& token_out,
                    const BigInt& in, const BigInt& out) {
    RawLog log;
    log.emitter = pool;
    Hash32 pool_id;
    std::copy(pool.bytes.begin(), pool.bytes.end(), pool_id.bytes.begin());
    log.topics = {swap_topics().balancer_v2, pool_id, abi::word_from_address(token_in),
                  abi::word_from_address(token_out)};
    abi::append_word(log.data, abi::word_from_uint(in));
    abi::append_word(log.data, abi::word_from_uint(out));
    log.log_index = 9;
    return log;
}

}  // namespace

TEST_CASE("v2 decode: token0 in, token1 out") {
    const auto meta = pair_meta(Protocol::UniV2);
    const auto ev = decode_v2_swap(v2_log(BigInt(1000), 0, 0, BigInt(250)), meta, hash(0xaa));
    CHECK(ev.pool == meta.pool);
    CHECK(ev.protocol == Protocol::UniV2);
    CHECK(ev.token_in == addr(1));
    CHECK(ev.token_out == addr(2));
    CHECK(ev.amount_in == TokenAmount{BigInt(1000), 18});
    CHECK(ev.amount_out == TokenAmount{BigInt(250), 6});
    CHECK(ev.recipient == addr(0x77));
    CHECK(ev.log_index == 3);
    CHECK(ev.tx_hash == hash(0xaa));
}

TEST_CASE("v2 decode: token1 in, token0 out") {
    const auto ev = decode_v2_swap(v2_log(0, BigInt(42), BigInt(7), 0),
                                   pair_meta(Protocol::UniV2), hash(1));
    CHECK(ev.token_in == addr(2));
    CHECK(ev.token_out == addr(1));
    CHECK(ev.amount_in.raw == 42);
    CHECK(ev.amount_out.raw == 7);
}

TEST_CASE("v2 decode rejections") {
    const auto meta = pair_meta(Protocol::UniV2);
    auto kind_of = [&](const RawLog& log) {
        try {
            decode_v2_swap(log, meta);
        } catch (const SwapDecodeError& e) {
            return e.kind();
        }
        FAIL("expected SwapDecodeError");
        return SwapDecodeError::Kind::Malformed;
    };
    CHECK(kind_of(v2_log(BigInt(1), BigInt(1), BigInt(1), 0)) ==
          SwapDecodeError::Kind::AmbiguousSwap);  // input on both sides
    CHECK(kind_of(v2_log(BigInt(1), 0, BigInt(1), BigInt(1))) ==
          SwapDecodeError::Kind::AmbiguousSwap);  // output on both sides
    CHECK(kind_of(v2_log(0, 0, BigInt(1), 0)) == SwapDecodeError::Kind::Malformed);
    CHECK(kind_of(v2_log(BigInt(1), 0, 0, 0)) == SwapDecodeError::Kind::Malformed);
    CHECK(kind_of(v2_log(BigInt(1), 0, BigInt(2), 0)) ==
          SwapDecodeError::Kind::AmbiguousSwap);  // in and out both on token0

    RawLog truncated = v2_log(BigInt(1), 0, 0, BigInt(1));
    truncated.data.resize(3 * abi::kWord);
    CHECK(kind_of(truncated) == SwapDecodeError::Kind::Malformed);

    RawLog two_topics = v2_log(BigInt(1), 0, 0, BigInt(1));
    two_topics.topics.resize(2);
    CHECK(kind_of(two_topics) == SwapDecodeError::Kind::Malformed);
}

TEST_CASE("v2 decode: protocol mismatch against registry") {
    CHECK_THROWS_AS(decode_v2_swap(v2_log(BigInt(1), 0, 0, BigInt(1)),
                                   pair_meta(Protocol::UniV3)),
                    SwapDecodeError);
}

TEST_CASE("v3 decode: positive amount flows into the pool") {
    const auto meta = pair_meta(Protocol::UniV3);
    const auto ev = decode_v3_swap(
        signed_pair_log(Protocol::UniV3, BigInt("3938300000000000000"), BigInt(-5313900)),
        meta, hash(2));
    CHECK(ev.token_in == addr(1));
    CHECK(ev.token_out == addr(2));
    CHECK(ev.amount_in.raw == BigInt("3938300000000000000"));
    CHECK(ev.amount_out.raw == 5313900);
    CHECK(ev.amount_out.decimals == 6);
}

TEST_CASE("v3 decode: reverse direction") {
    const auto ev = decode_v3_swap(signed_pair_log(Protocol::UniV3, BigInt(-10), BigInt(4)),
                                   pair_meta(Protocol::UniV3), hash(2));
    CHECK(ev.token_in == addr(2));
    CHECK(ev.amount_in.raw == 4);
    CHECK(ev.token_out == addr(1));
    CHECK(ev.amount_out.raw == 10);
}

TEST_CASE("v3 decode: zero input side still orients by the negative amount") {
    const auto ev = decode_v3_swap(signed_pair_log(Protocol::UniV3, 0, BigInt(-9)),
                                   pair_meta(Protocol::UniV3), hash(2));
    CHECK(ev.token_in == addr(1));
    CHECK(ev.amount_in.raw == 0);
    CHECK(ev.token_out == addr(2));
    CHECK(ev.amount_out.raw == 9);

    const auto ev2 = decode_v3_swap(signed_pair_log(Protocol::UniV3, BigInt(-9), 0),
                                    pair_meta(Protocol::UniV3), hash(2));
    CHECK(ev2.token_in == addr(2));
    CHECK(ev2.amount_in.raw == 0);
    CHECK(ev2.amount_out.raw == 9);
}

TEST_CASE("v3 decode rejections") {
    const auto meta = pair_meta(Protocol::UniV3);
    CHECK_THROWS_AS(decode_v3_swap(signed_pair_log(Protocol::UniV3, 0, 0), meta),
                    SwapDecodeError);
    CHECK_THROWS_AS(decode_v3_swap(signed_pair_log(Protocol::UniV3, BigInt(1), BigInt(1)), meta),
                    SwapDecodeError);
    CHECK_THROWS_AS(
        decode_v3_swap(signed_pair_log(Protocol::UniV3, BigInt(-1), BigInt(-1)), meta),
        SwapDecodeError);
    // algebra-shaped data under a v3 topic
    RawLog fat = signed_pair_log(Protocol::UniV3, BigInt(1), BigInt(-1));
    abi::append_word(fat.data, abi::word_from_uint(BigInt(3000)));
    CHECK_THROWS_AS(decode_v3_swap(fat, meta), SwapDecodeError);
}

TEST_CASE("algebra decode carries its extra fee word") {
    const auto meta = pair_meta(Protocol::Algebra);
    const auto ev = decode_algebra_swap(
        signed_pair_log(Protocol::Algebra, BigInt(-333), BigInt(21)), meta, hash(3));
    CHECK(ev.protocol == Protocol::Algebra);
    CHECK(ev.token_in == addr(2));
    CHECK(ev.amount_in.raw == 21);
    CHECK(ev.amount_out.raw == 333);

    // v3-shaped data under an algebra topic
    RawLog thin = signed_pair_log(Protocol::Algebra, BigInt(1), BigInt(-1));
    thin.data.resize(5 * abi::kWord);
    CHECK_THROWS_AS(decode_algebra_swap(thin, meta), SwapDecodeError);
}

TEST_CASE("balancer decode takes the pool from the poolId prefix") {
    const Address pool = addr(0x60);
    const auto ev = decode_balancer_swap(
        balancer_log(pool, addr(5), addr(6), BigInt(1000), BigInt(999)), hash(4),
        [](const Address&) { return std::optional<uint32_t>(8); });
    CHECK(ev.pool == pool);
    CHECK(ev.protocol == Protocol::BalancerV2);
    CHECK(ev.token_in == addr(5));
    CHECK(ev.token_out == addr(6));
    CHECK(ev.amount_in == TokenAmount{BigInt(1000), 8});
    CHECK(ev.amount_out == TokenAmount{BigInt(999), 8});
    CHECK(ev.recipient.is_zero());
}

TEST_CASE("balancer decode leaves amounts raw without a lookup") {
    const auto ev =
        decode_balancer_swap(balancer_log(addr(0x60), addr(5), addr(6), BigInt(1), BigInt(2)));
    CHECK(ev.amount_in.decimals == 0);
    CHECK(ev.amount_out.decimals == 0);
}

TEST_CASE("balancer decode rejections") {
    CHECK_THROWS_AS(
        decode_balancer_swap(balancer_log(addr(0x60), addr(5), addr(5), BigInt(1), BigInt(2))),
        SwapDecodeError);  // equal tokens
    CHECK_THROWS_AS(
        decode_balancer_swap(balancer_log(addr(0x60), addr(5), addr(6), 0, 0)),
        SwapDecodeError);  // both amounts zero
    RawLog three_topics = balancer_log(addr(0x60), addr(5), addr(6), BigInt(1), BigInt(2));
    three_topics.topics.resize(3);
    CHECK_THROWS_AS(decode_balancer_swap(three_topics), SwapDecodeError);
}

TEST_CASE("classify_log maps topic0 and nothing else") {
    CHECK(classify_log(v2_log(BigInt(1), 0, 0, BigInt(1))) == Protocol::UniV2);
    CHECK(classify_log(signed_pair_log(Protocol::UniV3, BigInt(1), BigInt(-1))) ==
          Protocol::UniV3);
    CHECK(classify_log(signed_pair_log(Protocol::Algebra, BigInt(1), BigInt(-1))) ==
          Protocol::Algebra);
    CHECK(classify_log(balancer_log(addr(0x60), addr(5), addr(6), BigInt(1), BigInt(2))) ==
          Protocol::BalancerV2);

    RawLog transfer;
    transfer.emitter = addr(1);
    transfer.topics = {keccak256("Transfer(address,address,uint256)"),
                       abi::word_from_address(addr(2)), abi::word_from_address(addr(3))};
    CHECK(classify_log(transfer) == std::nullopt);

    RawLog anonymous;
    anonymous.emitter = addr(1);
    CHECK(classify_log(anonymous) == std::nullopt);
}

TEST_CASE("pool meta validation") {
    CHECK_NOTHROW(pair_meta(Protocol::UniV2).validate());

    PoolMeta no_pool = pair_meta(Protocol::UniV2);
    no_pool.pool = Address{};
    CHECK_THROWS_AS(no_pool.validate(), std::invalid_argument);

    PoolMeta dup = pair_meta(Protocol::UniV2);
    dup.tokens = {addr(1), addr(1)};
    CHECK_THROWS_AS(dup.validate(), std::invalid_argument);

    PoolMeta counts = pair_meta(Protocol::UniV2);
    counts.decimals = {18};
    CHECK_THROWS_AS(counts.validate(), std::invalid_argument);

    PoolMeta triple = pair_meta(Protocol::UniV2);
    triple.tokens = {addr(1), addr(2), addr(3)};
    triple.decimals = {18, 6, 8};
    CHECK_THROWS_AS(triple.validate(), std::invalid_argument);  // pair pools take two

    triple.protocol = Protocol::BalancerV2;
    CHECK_NOTHROW(triple.validate());  // vault pools may hold more
}

TEST_CASE("registry put/lookup/snapshot and file round trip") {
    PoolRegistry reg;
    reg.put(pair_meta(Protocol::UniV2, 0x50));
    reg.put(pair_meta(Protocol::UniV3, 0x51));
    CHECK(reg.size() == 2);
    CHECK(reg.lookup(addr(0x50))->protocol == Protocol::UniV2);
    CHECK(reg.lookup(addr(0x52)) == std::nullopt);

    const auto path = (std::filesystem::temp_directory_path() / "reg_roundtrip.json").string();
    reg.save_file(path);
    const PoolRegistry loaded = PoolRegistry::load_file(path);
    CHECK(loaded.snapshot() == reg.snapshot());
    std::remove(path.c_str());
}

TEST_CASE("registry resolve consults the resolver once per pool") {
    PoolRegistry reg;
    std::atomic<int> calls{0};
    auto resolver = [&](const Address& pool, Protocol hint) -> std::optional<PoolMeta> {
        ++calls;
        auto m = pair_meta(hint);
        m.pool = pool;
        return m;
    };

    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i)
        threads.emplace_back([&] { reg.resolve(addr(0x50), Protocol::UniV2, resolver); });
    for (auto& t : threads) t.join();
    CHECK(calls.load() == 1);
    CHECK(reg.size() == 1);

    CHECK_NOTHROW(reg.resolve(addr(0x50), Protocol::UniV2));  // cached, no resolver needed
    CHECK_THROWS_AS(reg.resolve(addr(0x51), Protocol::UniV2), UnknownPoolError);
    auto nothing = [](const Address&, Protocol) { return std::optional<PoolMeta>{}; };
    CHECK_THROWS_AS(reg.resolve(addr(0x51), Protocol::UniV2, nothing), UnknownPoolError);
}

TEST_CASE("decode_transaction splits good and skipped legs") {
    PoolRegistry reg;
    reg.put(pair_meta(Protocol::UniV2, 0x50));

    RawTransaction tx;
    tx.hash = hash(0xbb);
    tx.logs.push_back(v2_log(BigInt(1000), 0, 0, BigInt(250), 0x50));
    tx.logs.push_back(v2_log(BigInt(1), 0, 0, BigInt(2), 0x66));      // unknown pool
    tx.logs.push_back(v2_log(BigInt(1), BigInt(1), 0, BigInt(2), 0x50));  // ambiguous
    RawLog noise;
    noise.emitter = addr(9);
    noise.topics = {keccak256("Transfer(address,address,uint256)")};
    tx.logs.push_back(noise);  // not a swap candidate at all

    const DecodedTx decoded = decode_transaction(tx, reg);
    CHECK(decoded.swaps.size() == 1);
    CHECK(decoded.swaps[0].tx_hash == hash(0xbb));
    CHECK(decoded.skipped.size() == 2);

    RawTransaction failed = tx;
    failed.status = TxStatus::Failure;
    const DecodedTx nothing = decode_transaction(failed, reg);
    CHECK(nothing.swaps.empty());
    CHECK(nothing.skipped.empty());
}
