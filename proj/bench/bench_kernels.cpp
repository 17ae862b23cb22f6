// Serial vs OpenMP timings for the two data-parallel kernels: GA population
// evaluation and random-forest fitting. Also checks the outputs agree.
#include <chrono>
#include <cstdio>
#include <string>

#include "hems/config.hpp"
#include "hems/forecast/ensemble.hpp"
#include "hems/moga.hpp"
#include "hems/parallel.hpp"
#include "hems/synth.hpp"

using namespace hems;
using Clock = std::chrono::steady_clock;

template <class F>
double seconds(F&& f) {
    const auto t0 = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
    const std::string fixture = argc > 1 ? argv[1] : HEMS_DATA_DIR "/summer_fixture.json";
    std::printf("threads: %d\n", worker_count());
    bool agree = true;

    const CaseConfig cfg = load_config(fixture).case_config();
    GaParams ga;
    ga.pop_size = 200;
    ga.generations = 100;
    GaResult rs, rp;
    ga.exec = Exec::serial;
    const double ts = seconds([&] { rs = evolve(cfg, CaseKind::d, {6, 6}, ga); });
    ga.exec = Exec::parallel;
    const double tp = seconds([&] { rp = evolve(cfg, CaseKind::d, {6, 6}, ga); });
    agree &= rs.history.back().hypervolume == rp.history.back().hypervolume && rs.front.size() == rp.front.size();
    std::printf("ga evolve (pop %d, %d gens):  serial %.3f s  parallel %.3f s  speedup %.2fx\n", ga.pop_size,
                ga.generations, ts, tp, ts / tp);

    const auto data = generate_synthetic(3, SynthProfile::summer_weekday, 60);
    auto ds = forecast::build_features(data.history.column("demand_kw"), data.history.column("occupancy"), 13);
    forecast::split_chronological(ds, 0.2);
    forecast::ForestParams fp;
    fp.n_trees = 200;
    fp.seed = 5;
    std::vector<double> ps, pp;
    fp.exec = Exec::serial;
    const double fs = seconds([&] { ps = forecast::RandomForest::fit(ds, fp).predict(ds.features); });
    fp.exec = Exec::parallel;
    const double fpar = seconds([&] { pp = forecast::RandomForest::fit(ds, fp).predict(ds.features); });
    agree &= ps == pp;
    std::printf("forest fit (%d trees, %zu rows): serial %.3f s  parallel %.3f s  speedup %.2fx\n", fp.n_trees,
                ds.size(), fs, fpar, fs / fpar);

    std::printf("serial and parallel results %s\n", agree ? "identical" : "DIFFER");
    return agree ? 0 : 1;
}
