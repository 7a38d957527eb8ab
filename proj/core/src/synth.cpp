#include "aascan/synth.hpp"

#include "aascan/abi.hpp"
#include "aascan/keccak.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <random>

namespace aascan::synth {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------- encoders

void require_pair_tokens(const SwapEvent& s, const PoolMeta& meta) {
    const bool straight = s.token_in == meta.token0() && s.token_out == meta.token1();
    const bool reversed = s.token_in == meta.token1() && s.token_out == meta.token0();
    if (!straight && !reversed) {
        throw UnencodableError("swap tokens do not match pool " + meta.pool.to_hex());
    }
}

void require_decimals(const SwapEvent& s, const PoolMeta& meta) {
    for (size_t i = 0; i < meta.tokens.size(); ++i) {
        if (s.token_in == meta.tokens[i] && s.amount_in.decimals != meta.decimals[i]) {
            throw UnencodableError("amount_in decimals do not match pool metadata");
        }
        if (s.token_out == meta.tokens[i] && s.amount_out.decimals != meta.decimals[i]) {
            throw UnencodableError("amount_out decimals do not match pool metadata");
        }
    }
}

RawLog encode_v2(const SwapEvent& s, const PoolMeta& meta) {
    require_pair_tokens(s, meta);
    require_decimals(s, meta);
    if (s.amount_in.raw <= 0 || s.amount_out.raw <= 0) {
        throw UnencodableError("V2 swaps need positive amounts on both sides");
    }
    const bool token0_in = s.token_in == meta.token0();

    RawLog log;
    log.emitter = meta.pool;
    log.log_index = s.log_index;
    log.topics = {swap_topics().uni_v2, abi::word_from_address(s.recipient),
                  abi::word_from_address(s.recipient)};
    abi::append_word(log.data, abi::word_from_uint(token0_in ? s.amount_in.raw : 0));
    abi::append_word(log.data, abi::word_from_uint(token0_in ? 0 : s.amount_in.raw));
    abi::append_word(log.data, abi::word_from_uint(token0_in ? 0 : s.amount_out.raw));
    abi::append_word(log.data, abi::word_from_uint(token0_in ? s.amount_out.raw : 0));
    return log;
}

RawLog encode_signed_pair(const SwapEvent& s, const PoolMeta& meta, const Hash32& topic,
                          bool with_fee_word) {
    require_pair_tokens(s, meta);
    require_decimals(s, meta);
    if (s.amount_in.raw < 0 || s.amount_out.raw < 0) {
        throw UnencodableError("negative swap amount");
    }
    if (s.amount_in.raw == 0 && s.amount_out.raw == 0) {
        throw UnencodableError("swap with no flow on either side");
    }
    const bool token0_in = s.token_in == meta.token0();
    const BigInt amount0 = token0_in ? s.amount_in.raw : -s.amount_out.raw;
    const BigInt amount1 = token0_in ? -s.amount_out.raw : s.amount_in.raw;

    RawLog log;
    log.emitter = meta.pool;
    log.log_index = s.log_index;
    log.topics = {topic, abi::word_from_address(s.recipient),
                  abi::word_from_address(s.recipient)};
    abi::append_word(log.data, abi::word_from_int(amount0));
    abi::append_word(log.data, abi::word_from_int(amount1));
    abi::append_word(log.data, abi::word_from_uint(0));  // sqrt price
    abi::append_word(log.data, abi::word_from_uint(0));  // liquidity
    abi::append_word(log.data, abi::word_from_int(0));   // tick
    if (with_fee_word) abi::append_word(log.data, abi::word_from_uint(3000));
    return log;
}

RawLog encode_balancer(const SwapEvent& s, const PoolMeta& meta) {
    require_decimals(s, meta);
    if (s.token_in == s.token_out) {
        throw UnencodableError("balancer swap with tokenIn == tokenOut");
    }
    if (s.amount_in.raw < 0 || s.amount_out.raw < 0) {
        throw UnencodableError("negative swap amount");
    }
    if (s.amount_in.raw == 0 && s.amount_out.raw == 0) {
        throw UnencodableError("swap with no flow on either side");
    }
    if (!s.recipient.is_zero()) {
        throw UnencodableError("balancer swap events carry no recipient");
    }

    Hash32 pool_id;  // pool address padded with zero specialization bytes
    std::copy(meta.pool.bytes.begin(), meta.pool.bytes.end(), pool_id.bytes.begin());

    RawLog log;
    log.emitter = meta.pool;
    log.log_index = s.log_index;
    log.topics = {swap_topics().balancer_v2, pool_id, abi::word_from_address(s.token_in),
                  abi::word_from_address(s.token_out)};
    abi::append_word(log.data, abi::word_from_uint(s.amount_in.raw));
    abi::append_word(log.data, abi::word_from_uint(s.amount_out.raw));
    return log;
}

// --------------------------------------------------------------------- rng

/// All randomness flows through one deterministic stream; the draw order is
/// part of the fixture format.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next() { return gen_(); }

    uint64_t uniform(uint64_t lo, uint64_t hi) {  // inclusive
        return lo + next() % (hi - lo + 1);
    }

    bool chance(double p) {
        constexpr uint64_t kScale = 1'000'000'000;
        const auto threshold = uint64_t(p * double(kScale));
        return next() % kScale < threshold;
    }

    BigInt below(const BigInt& limit) {  // in [0, limit)
        BigInt r = 0;
        const size_t chunks = 1 + (limit.str().size() / 18);
        for (size_t i = 0; i < chunks; ++i) {
            r = r * 1'000'000'000'000'000'000ULL + next() % 1'000'000'000'000'000'000ULL;
        }
        return r % limit;
    }

    /// Positive amount spanning 10^0 .. 10^(max_pow10+1) raw units.
    BigInt amount(uint32_t max_pow10) {
        const BigInt base = pow10(uint32_t(uniform(0, max_pow10)));
        return base + below(base);
    }

    Address address() {
        Address a;
        for (auto& b : a.bytes) b = uint8_t(next());
        a.bytes[19] |= 1;  // never the zero address
        return a;
    }

    Hash32 hash32() {
        Hash32 h;
        for (auto& b : h.bytes) b = uint8_t(next());
        return h;
    }

private:
    std::mt19937_64 gen_;
};

// ---------------------------------------------------------------- universe

struct SynthToken {
    Address addr;
    uint32_t decimals = 18;
    bool priced = false;
    Rational price;
};

struct Universe {
    std::vector<SynthToken> tokens;
    size_t priced_count = 0;
    std::map<std::pair<size_t, size_t>, std::map<Protocol, Address>> pools;
    PoolRegistry registry;
    std::vector<Address> fastlane;
    std::vector<Address> searchers;
    Address router;
    Address coinbase;
};

constexpr Protocol kProtocols[] = {Protocol::UniV2, Protocol::UniV3, Protocol::Algebra,
                                   Protocol::BalancerV2};

Universe build_universe(const SynthPlan& plan, Rng& rng) {
    Universe u;
    constexpr uint32_t kDecimalsCycle[] = {18, 6, 8, 18, 12, 2};
    u.priced_count = plan.token_count - plan.unpriced_token_count;
    for (uint32_t i = 0; i < plan.token_count; ++i) {
        SynthToken t;
        t.addr = rng.address();
        t.decimals = kDecimalsCycle[i % std::size(kDecimalsCycle)];
        t.priced = i < u.priced_count;
        if (i == 0) {
            t.price = 1;  // the native token doubles as the common currency
        } else if (t.priced) {
            t.price = Rational(rng.uniform(1, 100000), pow10(uint32_t(rng.uniform(0, 3))));
        }
        u.tokens.push_back(std::move(t));
    }

    for (size_t i = 0; i < u.tokens.size(); ++i) {
        for (size_t j = i + 1; j < u.tokens.size(); ++j) {
            for (Protocol p : kProtocols) {
                PoolMeta meta;
                meta.pool = rng.address();
                meta.protocol = p;
                meta.tokens = {u.tokens[i].addr, u.tokens[j].addr};
                meta.decimals = {u.tokens[i].decimals, u.tokens[j].decimals};
                u.pools[{i, j}][p] = meta.pool;
                u.registry.put(std::move(meta));
            }
        }
    }

    u.fastlane = {rng.address(), rng.address()};
    for (uint32_t i = 0; i < plan.searcher_count; ++i) u.searchers.push_back(rng.address());
    u.router = rng.address();
    u.coinbase = rng.address();
    return u;
}

ClassifierConfig classifier_from(const Universe& u) {
    ClassifierConfig cfg;
    cfg.price_table.native_token = u.tokens[0].addr;
    cfg.price_table.common_currency = u.tokens[0].addr;
    for (const SynthToken& t : u.tokens) {
        cfg.price_table.decimals[t.addr] = t.decimals;
        if (t.priced) cfg.price_table.prices[t.addr] = t.price;
    }
    cfg.fastlane_addresses.insert(u.fastlane.begin(), u.fastlane.end());
    cfg.validate();
    return cfg;
}

// --------------------------------------------------------------- generator

struct TxBuild {
    RawTransaction tx;
    TruthEntry truth;
};

class Generator {
public:
    Generator(const SynthPlan& plan, Rng& rng, const Universe& u)
        : plan_(plan), rng_(rng), u_(u) {}

    TxBuild make(uint32_t index) {
        if (rng_.chance(plan_.planted_aa_fraction)) {
            return make_cycle(index, rng_.chance(plan_.fastlane_fraction), false);
        }
        if (rng_.chance(plan_.near_miss_fraction)) {
            switch (rng_.uniform(0, 2)) {
                case 0: return make_near_miss_c1(index);
                case 1: return make_near_miss_c2(index);
                default: return make_cycle(index, rng_.chance(0.5), true);
            }
        }
        return make_noise(index);
    }

private:
    const SynthPlan& plan_;
    Rng& rng_;
    const Universe& u_;

    Rational native_price() const { return u_.tokens[0].price; }
    uint32_t native_decimals() const { return u_.tokens[0].decimals; }

    PoolMeta pool_for(size_t i, size_t j, Protocol p) const {
        const auto key = std::minmax(i, j);
        return *u_.registry.lookup(u_.pools.at({key.first, key.second}).at(p));
    }

    RawTransaction base_tx(uint32_t index) {
        RawTransaction tx;
        tx.hash = rng_.hash32();
        tx.index = index;
        tx.from = u_.searchers[rng_.uniform(0, u_.searchers.size() - 1)];
        tx.to = u_.router;
        tx.gas_used = rng_.uniform(60000, 1200000);
        tx.effective_gas_price = 0;
        return tx;
    }

    /// Largest wei count whose common-currency value does not exceed target.
    BigInt wei_below(const Rational& target) {
        if (target <= 0) return 0;
        const Rational wei = target * pow10(native_decimals()) / native_price();
        return boost::multiprecision::numerator(wei) / boost::multiprecision::denominator(wei);
    }

    Rational wei_value(const BigInt& wei) {
        return Rational(wei, pow10(native_decimals())) * native_price();
    }

    /// Sets gas fields so the fee lands just under `target`; returns the
    /// exact resulting fee.
    Rational set_fee_below(RawTransaction& tx, const Rational& target) {
        const BigInt budget = wei_below(target);
        tx.effective_gas_price = budget / tx.gas_used;
        return wei_value(BigInt(tx.gas_used) * tx.effective_gas_price);
    }

    /// Sets gas fields so the fee strictly exceeds `target`.
    Rational set_fee_above(RawTransaction& tx, const Rational& target) {
        tx.effective_gas_price = wei_below(target) / tx.gas_used + 1;
        return wei_value(BigInt(tx.gas_used) * tx.effective_gas_price);
    }

    SwapEvent make_leg(const RawTransaction& tx, size_t from_idx, size_t to_idx,
                       const BigInt& amount_in, const BigInt& amount_out, Protocol protocol,
                       uint32_t log_index) {
        const PoolMeta meta = pool_for(from_idx, to_idx, protocol);
        SwapEvent s;
        s.pool = meta.pool;
        s.protocol = protocol;
        s.token_in = u_.tokens[from_idx].addr;
        s.token_out = u_.tokens[to_idx].addr;
        s.amount_in = TokenAmount{amount_in, u_.tokens[from_idx].decimals};
        s.amount_out = TokenAmount{amount_out, u_.tokens[to_idx].decimals};
        if (protocol != Protocol::BalancerV2) s.recipient = tx.from;
        s.log_index = log_index;
        s.tx_hash = tx.hash;
        return s;
    }

    void append_leg(RawTransaction& tx, const SwapEvent& s, Protocol protocol,
                    size_t from_idx, size_t to_idx) {
        const PoolMeta meta = pool_for(from_idx, to_idx, protocol);
        tx.logs.push_back(encode_swap(s, meta));
        maybe_noise_log(tx);
    }

    void add_transfer_log(RawTransaction& tx) {
        const SynthToken& t = u_.tokens[rng_.uniform(0, u_.tokens.size() - 1)];
        tx.logs.push_back(encode_transfer(t.addr, rng_.address(), rng_.address(),
                                          rng_.amount(plan_.max_amount_pow10),
                                          uint32_t(tx.logs.size())));
    }

    void maybe_noise_log(RawTransaction& tx) {
        if (rng_.chance(0.25)) add_transfer_log(tx);
    }

    uint32_t next_log_index(const RawTransaction& tx) { return uint32_t(tx.logs.size()); }

    /// Profitable cycle over 2..4 priced tokens; when `fee_dominated`, gas
    /// is set to swallow the entire margin instead (the third near-miss).
    TxBuild make_cycle(uint32_t index, bool fastlane, bool fee_dominated) {
        TxBuild out;
        RawTransaction& tx = out.tx = base_tx(index);

        const size_t max_len = std::min<size_t>(4, u_.priced_count);
        const size_t len = rng_.uniform(2, max_len);
        std::vector<size_t> path(u_.priced_count);
        for (size_t i = 0; i < path.size(); ++i) path[i] = i;
        for (size_t i = 0; i < len; ++i) {  // partial Fisher-Yates
            std::swap(path[i], path[rng_.uniform(i, path.size() - 1)]);
        }
        path.resize(len);

        std::vector<BigInt> amounts(len);  // amounts[k] enters leg k
        for (size_t k = 0; k < len; ++k) amounts[k] = rng_.amount(plan_.max_amount_pow10);
        const BigInt margin = 1 + rng_.below(amounts[0]);

        for (size_t k = 0; k < len; ++k) {
            const size_t from_idx = path[k];
            const size_t to_idx = path[(k + 1) % len];
            const BigInt& in = amounts[k];
            const BigInt out_amount = k + 1 < len ? amounts[k + 1] : amounts[0] + margin;
            const Protocol protocol = kProtocols[rng_.uniform(0, 3)];
            const SwapEvent leg = make_leg(tx, from_idx, to_idx, in, out_amount, protocol,
                                           next_log_index(tx));
            append_leg(tx, leg, protocol, from_idx, to_idx);
        }

        const SynthToken& profit_token = u_.tokens[path[0]];
        const Rational gross =
            Rational(margin, pow10(profit_token.decimals)) * profit_token.price;

        Rational beta = 0;
        if (fastlane) {
            const BigInt bid_wei = wei_below(gross / rng_.uniform(4, 20));
            switch (rng_.uniform(0, 2)) {
                case 0:  // bid as top-level value
                    tx.to = u_.fastlane[rng_.uniform(0, u_.fastlane.size() - 1)];
                    tx.value.raw = bid_wei;
                    beta = wei_value(bid_wei);
                    break;
                case 1: {  // bid as an auction log
                    const Address& auction = u_.fastlane[rng_.uniform(0, u_.fastlane.size() - 1)];
                    tx.logs.push_back(
                        encode_bid_paid(auction, tx.from, bid_wei, next_log_index(tx)));
                    beta = wei_value(bid_wei);
                    break;
                }
                default: {  // both at once
                    const Address& auction = u_.fastlane[rng_.uniform(0, u_.fastlane.size() - 1)];
                    tx.to = auction;
                    tx.value.raw = bid_wei;
                    tx.logs.push_back(
                        encode_bid_paid(auction, tx.from, bid_wei, next_log_index(tx)));
                    beta = wei_value(bid_wei) * 2;
                    break;
                }
            }
        }

        Rational tau;
        if (fee_dominated) {
            tau = set_fee_above(tx, gross * rng_.uniform(2, 5) - beta);
        } else {
            tau = set_fee_below(tx, gross / rng_.uniform(4, 20));
        }
        const Rational profit = gross - tau - beta;

        out.truth.swap_count = uint32_t(len);
        out.truth.profit = profit;
        if (fee_dominated) {
            out.truth.is_aa = false;
            out.truth.strategy = Strategy::NotAA;
            out.truth.kind = "near_miss_c3";
        } else {
            out.truth.is_aa = true;
            out.truth.strategy = fastlane ? Strategy::FastLaneBased : Strategy::SpamBased;
            out.truth.kind = fastlane ? "aa_cycle_fastlane" : "aa_cycle";
        }
        return out;
    }

    /// Single profitable-looking leg: receives tokens for nothing, so only
    /// the two-swap minimum fails.
    TxBuild make_near_miss_c1(uint32_t index) {
        TxBuild out;
        RawTransaction& tx = out.tx = base_tx(index);

        const size_t to_idx = rng_.uniform(0, u_.priced_count - 1);
        size_t from_idx = rng_.uniform(0, u_.tokens.size() - 1);
        if (from_idx == to_idx) from_idx = (to_idx + 1) % u_.tokens.size();
        const Protocol protocol = kProtocols[1 + rng_.uniform(0, 2)];  // signed or balancer
        const BigInt amount_out = rng_.amount(plan_.max_amount_pow10);
        const SwapEvent leg =
            make_leg(tx, from_idx, to_idx, 0, amount_out, protocol, next_log_index(tx));
        append_leg(tx, leg, protocol, from_idx, to_idx);

        const SynthToken& token = u_.tokens[to_idx];
        const Rational gross = Rational(amount_out, pow10(token.decimals)) * token.price;
        const Rational tau = set_fee_below(tx, gross / rng_.uniform(4, 20));

        out.truth = {false, Strategy::NotAA, gross - tau, 1, "near_miss_c1"};
        return out;
    }

    /// Two legs draining the same token: positive priced total, negative
    /// net delta, so only the no-loss condition fails.
    TxBuild make_near_miss_c2(uint32_t index) {
        TxBuild out;
        RawTransaction& tx = out.tx = base_tx(index);

        const size_t t0 = rng_.uniform(0, u_.priced_count - 1);
        size_t t1 = rng_.uniform(0, u_.priced_count - 1);
        if (t1 == t0) t1 = (t0 + 1) % u_.priced_count;

        const BigInt x1 = rng_.amount(plan_.max_amount_pow10);
        const BigInt x2 = rng_.amount(plan_.max_amount_pow10);
        const SynthToken& tok0 = u_.tokens[t0];
        const SynthToken& tok1 = u_.tokens[t1];

        // Out amounts worth twice the drained value, so gross stays positive.
        const Rational drained = Rational(x1 + x2, pow10(tok1.decimals)) * tok1.price;
        const Rational out_needed = drained * 2 * pow10(tok0.decimals) / tok0.price;
        const BigInt y_total = boost::multiprecision::numerator(out_needed) /
                                   boost::multiprecision::denominator(out_needed) +
                               1;
        const BigInt y1 = 1 + rng_.below(y_total);
        const BigInt y2 = y_total - y1 + 1;

        const Protocol p1 = kProtocols[rng_.uniform(0, 3)];
        const SwapEvent leg1 = make_leg(tx, t1, t0, x1, y1, p1, next_log_index(tx));
        append_leg(tx, leg1, p1, t1, t0);
        const Protocol p2 = kProtocols[rng_.uniform(0, 3)];
        const SwapEvent leg2 = make_leg(tx, t1, t0, x2, y2, p2, next_log_index(tx));
        append_leg(tx, leg2, p2, t1, t0);

        const Rational gross =
            Rational(y1 + y2, pow10(tok0.decimals)) * tok0.price - drained;
        const Rational tau = set_fee_below(tx, gross / rng_.uniform(4, 20));

        out.truth = {false, Strategy::NotAA, gross - tau, 2, "near_miss_c2"};
        return out;
    }

    TxBuild make_noise(uint32_t index) {
        TxBuild out;
        RawTransaction& tx = out.tx = base_tx(index);
        tx.effective_gas_price = rng_.uniform(1, 500) * 1'000'000'000ULL;
        out.truth = {false, Strategy::NotAA, Rational(0), 0, ""};

        switch (rng_.uniform(0, 5)) {
            case 0:  // bare transfer, no logs
                out.truth.kind = "noise_empty";
                break;
            case 1: {  // unrelated token transfers
                const auto n = rng_.uniform(1, 3);
                for (uint64_t i = 0; i < n; ++i) add_transfer_log(tx);
                out.truth.kind = "noise_transfer";
                break;
            }
            case 2: {  // failed arbitrage attempt: logs present, status 0
                tx.status = TxStatus::Failure;
                const size_t a = rng_.uniform(0, u_.priced_count - 1);
                const size_t b = (a + 1) % u_.priced_count;
                const BigInt x = rng_.amount(plan_.max_amount_pow10);
                const SwapEvent leg =
                    make_leg(tx, a, b, x, x + 1, Protocol::UniV2, next_log_index(tx));
                const SwapEvent back =
                    make_leg(tx, b, a, x + 1, x + 2, Protocol::UniV2, next_log_index(tx) + 1);
                tx.logs.push_back(encode_swap(leg, pool_for(a, b, Protocol::UniV2)));
                tx.logs.push_back(encode_swap(back, pool_for(a, b, Protocol::UniV2)));
                out.truth.kind = "noise_failed";
                break;
            }
            case 3: {  // honest single swap
                const size_t a = rng_.uniform(0, u_.tokens.size() - 1);
                size_t b = rng_.uniform(0, u_.tokens.size() - 1);
                if (a == b) b = (a + 1) % u_.tokens.size();
                const Protocol protocol = kProtocols[rng_.uniform(0, 3)];
                const SwapEvent leg =
                    make_leg(tx, a, b, rng_.amount(plan_.max_amount_pow10),
                             rng_.amount(plan_.max_amount_pow10), protocol,
                             next_log_index(tx));
                append_leg(tx, leg, protocol, a, b);
                out.truth.swap_count = 1;
                out.truth.kind = "noise_single_swap";
                break;
            }
            case 4: {  // malformed and unknown-pool legs around one good one
                RawLog junk;  // V2-shaped log from an unregistered pool
                junk.emitter = rng_.address();
                junk.log_index = next_log_index(tx);
                junk.topics = {swap_topics().uni_v2, abi::word_from_address(tx.from),
                               abi::word_from_address(tx.from)};
                for (int w = 0; w < 4; ++w) abi::append_word(junk.data, abi::word_from_uint(0));
                tx.logs.push_back(std::move(junk));

                const size_t a = rng_.uniform(0, u_.priced_count - 1);
                const size_t b = (a + 1) % u_.priced_count;
                const Protocol protocol = kProtocols[rng_.uniform(0, 3)];
                const SwapEvent leg =
                    make_leg(tx, a, b, rng_.amount(plan_.max_amount_pow10),
                             rng_.amount(plan_.max_amount_pow10), protocol,
                             next_log_index(tx));
                append_leg(tx, leg, protocol, a, b);
                out.truth.swap_count = 1;
                out.truth.kind = "noise_malformed_leg";
                break;
            }
            default: {  // auction bid without a winning arbitrage
                const Address& auction = u_.fastlane[rng_.uniform(0, u_.fastlane.size() - 1)];
                tx.to = auction;
                tx.value.raw = BigInt(rng_.uniform(1, 1000)) * pow10(15);
                tx.logs.push_back(
                    encode_bid_paid(auction, tx.from, tx.value.raw, next_log_index(tx)));
                out.truth.kind = "noise_losing_bid";
                break;
            }
        }
        return out;
    }
};

}  // namespace

RawLog encode_swap(const SwapEvent& s, const PoolMeta& meta) {
    meta.validate();
    if (s.protocol != meta.protocol) {
        throw UnencodableError("swap protocol does not match pool protocol");
    }
    if (s.pool != meta.pool) {
        throw UnencodableError("swap pool does not match pool metadata");
    }
    switch (meta.protocol) {
        case Protocol::UniV2: return encode_v2(s, meta);
        case Protocol::UniV3:
            return encode_signed_pair(s, meta, swap_topics().uni_v3, false);
        case Protocol::Algebra:
            return encode_signed_pair(s, meta, swap_topics().algebra, true);
        case Protocol::BalancerV2: return encode_balancer(s, meta);
    }
    throw UnencodableError("unknown protocol");
}

RawLog encode_bid_paid(const Address& auction, const Address& searcher, const BigInt& wei,
                       uint32_t log_index) {
    RawLog log;
    log.emitter = auction;
    log.log_index = log_index;
    log.topics = {bid_paid_topic(), abi::word_from_address(searcher)};
    abi::append_word(log.data, abi::word_from_uint(wei));
    return log;
}

RawLog encode_transfer(const Address& token, const Address& from, const Address& to,
                       const BigInt& amount, uint32_t log_index) {
    static const Hash32 kTransferTopic = keccak256("Transfer(address,address,uint256)");
    RawLog log;
    log.emitter = token;
    log.log_index = log_index;
    log.topics = {kTransferTopic, abi::word_from_address(from), abi::word_from_address(to)};
    abi::append_word(log.data, abi::word_from_uint(amount));
    return log;
}

void SynthPlan::validate() const {
    const auto fraction_ok = [](double f) { return f >= 0.0 && f <= 1.0; };
    if (!fraction_ok(planted_aa_fraction) || !fraction_ok(fastlane_fraction) ||
        !fraction_ok(near_miss_fraction)) {
        throw std::invalid_argument("plan fractions must lie in [0, 1]");
    }
    if (block_count == 0) throw std::invalid_argument("block_count must be positive");
    if (min_tx_per_block > max_tx_per_block) {
        throw std::invalid_argument("min_tx_per_block exceeds max_tx_per_block");
    }
    if (token_count < 3) throw std::invalid_argument("need at least three tokens");
    if (unpriced_token_count + 3 > token_count) {
        throw std::invalid_argument("need at least three priced tokens");
    }
    if (searcher_count == 0) throw std::invalid_argument("need at least one searcher");
    if (max_amount_pow10 > 30) throw std::invalid_argument("max_amount_pow10 too large");
    if (block_interval_seconds <= 0) {
        throw std::invalid_argument("block_interval_seconds must be positive");
    }
}

SynthPlan SynthPlan::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open synth plan: " + path);
    json j = json::parse(in);

    SynthPlan plan;
    plan.seed = j.value("seed", plan.seed);
    plan.block_count = j.value("block_count", plan.block_count);
    if (j.contains("tx_per_block")) {
        plan.min_tx_per_block = j["tx_per_block"].value("min", plan.min_tx_per_block);
        plan.max_tx_per_block = j["tx_per_block"].value("max", plan.max_tx_per_block);
    }
    plan.planted_aa_fraction = j.value("planted_aa_fraction", plan.planted_aa_fraction);
    plan.fastlane_fraction = j.value("fastlane_fraction", plan.fastlane_fraction);
    plan.near_miss_fraction = j.value("near_miss_fraction", plan.near_miss_fraction);
    plan.token_count = j.value("token_count", plan.token_count);
    plan.unpriced_token_count = j.value("unpriced_token_count", plan.unpriced_token_count);
    plan.searcher_count = j.value("searcher_count", plan.searcher_count);
    plan.start_block = j.value("start_block", plan.start_block);
    plan.start_timestamp = j.value("start_timestamp", plan.start_timestamp);
    plan.block_interval_seconds = j.value("block_interval_seconds", plan.block_interval_seconds);
    plan.max_amount_pow10 = j.value("max_amount_pow10", plan.max_amount_pow10);
    plan.validate();
    return plan;
}

void SynthPlan::save_file(const std::string& path) const {
    const json j{
        {"seed", seed},
        {"block_count", block_count},
        {"tx_per_block", {{"min", min_tx_per_block}, {"max", max_tx_per_block}}},
        {"planted_aa_fraction", planted_aa_fraction},
        {"fastlane_fraction", fastlane_fraction},
        {"near_miss_fraction", near_miss_fraction},
        {"token_count", token_count},
        {"unpriced_token_count", unpriced_token_count},
        {"searcher_count", searcher_count},
        {"start_block", start_block},
        {"start_timestamp", start_timestamp},
        {"block_interval_seconds", block_interval_seconds},
        {"max_amount_pow10", max_amount_pow10},
    };
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write synth plan: " + path);
    out << j.dump(2) << '\n';
}

GroundTruth GroundTruth::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ground truth: " + path);
    json j = json::parse(in);

    GroundTruth truth;
    for (const auto& [hash, e] : j.at("entries").items()) {
        TruthEntry entry;
        entry.is_aa = e.at("is_aa").get<bool>();
        entry.strategy = strategy_from_string(e.at("strategy").get<std::string>());
        entry.profit = rational_from_string(e.at("profit").get<std::string>());
        entry.swap_count = e.at("swap_count").get<uint32_t>();
        entry.kind = e.value("kind", std::string());
        truth.entries[Hash32::from_hex(hash)] = std::move(entry);
    }
    return truth;
}

void GroundTruth::save_file(const std::string& path) const {
    json entries_json = json::object();
    for (const auto& [hash, e] : entries) {
        entries_json[hash.to_hex()] = {
            {"is_aa", e.is_aa},
            {"strategy", strategy_to_string(e.strategy)},
            {"profit", rational_to_string(e.profit)},
            {"swap_count", e.swap_count},
            {"kind", e.kind},
        };
    }
    const json j{{"entries", std::move(entries_json)}};
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write ground truth: " + path);
    out << j.dump(2) << '\n';
}

SynthOutput generate(const SynthPlan& plan) {
    plan.validate();
    Rng rng(plan.seed);

    SynthOutput out;
    const Universe u = build_universe(plan, rng);
    out.classifier = classifier_from(u);
    Generator gen(plan, rng, u);

    for (uint64_t b = 0; b < plan.block_count; ++b) {
        RawBlock block;
        block.number = plan.start_block + b;
        block.timestamp = plan.start_timestamp + int64_t(b) * plan.block_interval_seconds;
        block.coinbase = u.coinbase;
        const auto tx_count = rng.uniform(plan.min_tx_per_block, plan.max_tx_per_block);
        for (uint32_t i = 0; i < tx_count; ++i) {
            TxBuild built = gen.make(i);
            out.truth.entries[built.tx.hash] = std::move(built.truth);
            block.transactions.push_back(std::move(built.tx));
        }
        out.blocks.push_back(std::move(block));
    }

    for (const auto& [addr, meta] : u.registry.snapshot()) {
        (void)addr;
        out.pools.put(meta);
    }
    return out;
}

OracleEnv oracle_env_from(const PoolRegistry& pools, const ClassifierConfig& cfg) {
    OracleEnv env;
    for (const auto& [addr, meta] : pools.snapshot()) {
        if (meta.protocol != Protocol::BalancerV2) {
            env.pair_tokens[addr] = {meta.tokens[0], meta.tokens[1]};
        }
    }
    env.prices = cfg.price_table.prices;
    env.prices[cfg.price_table.common_currency] = 1;
    env.decimals = cfg.price_table.decimals;
    env.dust = cfg.dust_threshold;
    env.fastlane = cfg.fastlane_addresses;
    env.native_decimals = cfg.price_table.decimals_of(cfg.price_table.native_token).value_or(18);
    env.native_price = cfg.price_table.native_price();
    return env;
}

OracleLabel oracle_classify(const RawTransaction& tx, const OracleEnv& env) {
    // Everything below is computed from first principles on purpose; keep it
    // free of decode/classify helpers.
    const auto be_uint = [](const std::vector<uint8_t>& data, size_t word) {
        BigInt v = 0;
        for (size_t i = 0; i < 32; ++i) v = (v << 8) | data[word * 32 + i];
        return v;
    };
    const auto be_int = [&](const std::vector<uint8_t>& data, size_t word) {
        BigInt v = be_uint(data, word);
        if (data[word * 32] & 0x80) v -= BigInt(1) << 256;
        return v;
    };
    const auto low20 = [](const std::array<uint8_t, 32>& word) {
        Address a;
        std::copy(word.begin() + 12, word.end(), a.bytes.begin());
        return a;
    };

    const Hash32 v2 = keccak256("Swap(address,uint256,uint256,uint256,uint256,address)");
    const Hash32 v3 = keccak256("Swap(address,address,int256,int256,uint160,uint128,int24)");
    const Hash32 alg =
        keccak256("Swap(address,address,int256,int256,uint160,uint128,int24,uint24)");
    const Hash32 bal = keccak256("Swap(bytes32,address,address,uint256,uint256)");
    const Hash32 bid = keccak256("BidPaid(address,uint256)");

    std::map<Address, BigInt> flows;
    size_t legs = 0;
    if (tx.status == TxStatus::Success) {
        for (const RawLog& log : tx.logs) {
            if (log.topics.empty()) continue;
            const Hash32& t0 = log.topics[0];

            if (t0 == v2) {
                if (log.topics.size() != 3 || log.data.size() != 128) continue;
                auto pool = env.pair_tokens.find(log.emitter);
                if (pool == env.pair_tokens.end()) continue;
                const BigInt in0 = be_uint(log.data, 0), in1 = be_uint(log.data, 1);
                const BigInt out0 = be_uint(log.data, 2), out1 = be_uint(log.data, 3);
                const bool one_in = (in0 > 0) != (in1 > 0);
                const bool one_out = (out0 > 0) != (out1 > 0);
                if (!one_in || !one_out) continue;
                if ((in0 > 0) == (out0 > 0)) continue;  // same side in and out
                const Address& token_in = in0 > 0 ? pool->second.first : pool->second.second;
                const Address& token_out = out0 > 0 ? pool->second.first : pool->second.second;
                flows[token_in] -= in0 > 0 ? in0 : in1;
                flows[token_out] += out0 > 0 ? out0 : out1;
                ++legs;
            } else if (t0 == v3 || t0 == alg) {
                const size_t want = t0 == v3 ? 160 : 192;
                if (log.topics.size() != 3 || log.data.size() != want) continue;
                auto pool = env.pair_tokens.find(log.emitter);
                if (pool == env.pair_tokens.end()) continue;
                const BigInt a0 = be_int(log.data, 0), a1 = be_int(log.data, 1);
                if ((a0 > 0 && a1 > 0) || (a0 < 0 && a1 < 0) || (a0 == 0 && a1 == 0)) continue;
                flows[pool->second.first] -= a0;   // positive a0 flows to the pool
                flows[pool->second.second] -= a1;
                ++legs;
            } else if (t0 == bal) {
                if (log.topics.size() != 4 || log.data.size() != 64) continue;
                const Address token_in = low20(log.topics[2].bytes);
                const Address token_out = low20(log.topics[3].bytes);
                if (token_in == token_out) continue;
                const BigInt in = be_uint(log.data, 0), out = be_uint(log.data, 1);
                if (in == 0 && out == 0) continue;
                flows[token_in] -= in;
                flows[token_out] += out;
                ++legs;
            }
        }
    }

    bool no_loss = true;
    for (const auto& [token, delta] : flows) {
        auto dust = env.dust.find(token);
        const BigInt allowance = dust == env.dust.end() ? BigInt(0) : dust->second;
        if (delta < -allowance) no_loss = false;
    }

    Rational gross = 0;
    for (const auto& [token, delta] : flows) {
        auto price = env.prices.find(token);
        if (price == env.prices.end()) continue;
        auto dec = env.decimals.find(token);
        const uint32_t d = dec == env.decimals.end() ? 0 : dec->second;
        gross += Rational(delta, pow10(d)) * price->second;
    }

    const Rational fee = Rational(BigInt(tx.gas_used) * tx.effective_gas_price,
                                  pow10(env.native_decimals)) *
                         env.native_price;

    BigInt bid_wei = 0;
    bool touched_fastlane = false;
    if (tx.to && env.fastlane.count(*tx.to)) {
        bid_wei += tx.value.raw;
        touched_fastlane = true;
    }
    for (const RawLog& log : tx.logs) {
        if (!env.fastlane.count(log.emitter)) continue;
        touched_fastlane = true;
        if (log.topics.size() == 2 && log.topics[0] == bid && log.data.size() == 32) {
            bid_wei += be_uint(log.data, 0);
        }
    }
    const Rational bid_value =
        Rational(bid_wei, pow10(env.native_decimals)) * env.native_price;

    OracleLabel label;
    label.is_aa = legs >= 2 && no_loss && gross - fee - bid_value > 0;
    label.strategy = !label.is_aa ? Strategy::NotAA
                     : touched_fastlane ? Strategy::FastLaneBased
                                        : Strategy::SpamBased;
    return label;
}

}  // namespace aascan::synth
