#include <benchmark/benchmark.h>

#include <boost/random/uniform_int_distribution.hpp>

#include "uam/battery/battery.hpp"
#include "uam/battery/cycle_life.hpp"
#include "uam/energy/vehicle_spec.hpp"
#include "uam/random.hpp"
#include "uam/sim/event_queue.hpp"
#include "uam/sim/scenario.hpp"
#include "uam/sim/simulation.hpp"
#include "uam/vertidrome/slot_table.hpp"

using namespace uam;

namespace {

std::string data(const std::string& rel) { return std::string(UAM_DATA_DIR) + "/" + rel; }

void BM_EventQueue(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  RandomStreams streams(1);
  for (auto _ : state) {
    auto rng = streams.stream("bench-queue");
    boost::random::uniform_int_distribution<SimTime> when(0, 86400);
    boost::random::uniform_int_distribution<int> kind(0, 7);
    sim::EventQueue q;
    for (int i = 0; i < n; ++i) q.schedule(when(rng), static_cast<sim::EventKind>(kind(rng)));
    while (auto e = q.pop()) benchmark::DoNotOptimize(e->id);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EventQueue)->Arg(1000)->Arg(100000);

void BM_SlotRequest(benchmark::State& state) {
  vertidrome::Vertidrome v;
  v.id = "X";
  v.n_fato = 2;
  v.n_stands = 4;
  RandomStreams streams(2);
  for (auto _ : state) {
    auto rng = streams.stream("bench-slots");
    boost::random::uniform_int_distribution<SimTime> when(0, 80000);
    vertidrome::SlotTable t(0, v, 86400);
    for (int i = 0; i < 500; ++i) benchmark::DoNotOptimize(t.request_slot(vertidrome::Movement::arrival, when(rng)));
  }
  state.SetItemsProcessed(state.iterations() * 500);
}
BENCHMARK(BM_SlotRequest);

void BM_SimulationDay(benchmark::State& state) {
  const auto s = sim::load_scenario_file(data("scenarios/hamburg-like.json"));
  for (auto _ : state) benchmark::DoNotOptimize(sim::run_scenario(s).size());
}
BENCHMARK(BM_SimulationDay)->Unit(benchmark::kMillisecond);

void BM_CyclesToThreshold(benchmark::State& state) {
  const auto spec = energy::spec_from_json(nlohmann::json::parse(sim::read_text_file(data("specs/multirotor_near.json"))),
                                           "multirotor_near");
  const auto aging = battery::aging_from_json(
      nlohmann::json::parse(sim::read_text_file(data("calibration/aging_params.json")))["params"]);
  const auto profile = battery::design_profile(spec, 4);
  for (auto _ : state) benchmark::DoNotOptimize(battery::cycles_to_threshold(spec, aging, profile, 0.8).cycles);
}
BENCHMARK(BM_CyclesToThreshold)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
