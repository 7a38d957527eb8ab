#include "aascan/analytics.hpp"
#include "aascan/classify.hpp"
#include "aascan/decode.hpp"
#include "aascan/fixture.hpp"
#include "aascan/keccak.hpp"
#include "aascan/pipeline.hpp"
#include "aascan/synth.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

using namespace aascan;

namespace {

std::vector<uint8_t> random_bytes(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<uint8_t> out(n);
    for (auto& b : out) b = static_cast<uint8_t>(rng());
    return out;
}

// A generated ledger shared across the pipeline benchmarks.
const synth::SynthOutput& ledger() {
    static const synth::SynthOutput out = [] {
        synth::SynthPlan plan;
        plan.seed = 0xbe9c;
        plan.block_count = 200;
        return synth::generate(plan);
    }();
    return out;
}

void bench_keccak256(benchmark::State& state) {
    const auto data = random_bytes(static_cast<size_t>(state.range(0)), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(keccak256(data));
    }
    state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_keccak256)->Arg(32)->Arg(256)->Arg(4096);

void bench_decode_transaction(benchmark::State& state) {
    const auto& out = ledger();
    PoolRegistry registry(out.pools);
    // the busiest transaction of the ledger
    const RawTransaction* busiest = nullptr;
    for (const RawBlock& b : out.blocks)
        for (const RawTransaction& tx : b.transactions)
            if (!busiest || tx.logs.size() > busiest->logs.size()) busiest = &tx;
    for (auto _ : state) {
        benchmark::DoNotOptimize(decode_transaction(*busiest, registry));
    }
}
BENCHMARK(bench_decode_transaction);

void bench_classify_block(benchmark::State& state) {
    const auto& out = ledger();
    PoolRegistry registry(out.pools);
    const RawBlock* largest = &out.blocks.front();
    for (const RawBlock& b : out.blocks)
        if (b.transactions.size() > largest->transactions.size()) largest = &b;
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify_block(*largest, registry, {}, out.classifier));
    }
    state.SetItemsProcessed(state.iterations() * largest->transactions.size());
}
BENCHMARK(bench_classify_block);

void bench_fixture_line_roundtrip(benchmark::State& state) {
    const auto& out = ledger();
    const RawBlock* largest = &out.blocks.front();
    for (const RawBlock& b : out.blocks)
        if (b.transactions.size() > largest->transactions.size()) largest = &b;
    const std::string line = block_to_line(*largest);
    for (auto _ : state) {
        benchmark::DoNotOptimize(block_from_line(line, 1));
    }
    state.SetBytesProcessed(state.iterations() * line.size());
}
BENCHMARK(bench_fixture_line_roundtrip);

void bench_aggregate(benchmark::State& state) {
    std::vector<Classification> stream;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 5000; ++i) {
        Classification v;
        v.tx_hash.bytes[0] = static_cast<uint8_t>(i);
        v.tx_hash.bytes[1] = static_cast<uint8_t>(i >> 8);
        v.timestamp = 1700000000 + i * 13;
        v.gross_value = Rational(i % 700, 100);
        v.tau = Rational(3, 1000);
        v.profit = v.gross_value - v.tau;
        if (v.profit > 0 && i % 3 != 0) {
            v.is_aa = true;
            v.strategy = i % 7 == 0 ? Strategy::FastLaneBased : Strategy::SpamBased;
        }
        v.searcher.bytes[19] = static_cast<uint8_t>(rng() % 16);
        stream.push_back(v);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(aggregate(stream, {}, {}, {1700000000, 28}));
    }
    state.SetItemsProcessed(state.iterations() * stream.size());
}
BENCHMARK(bench_aggregate);

}  // namespace

BENCHMARK_MAIN();
