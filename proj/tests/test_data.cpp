#include <doctest.h>

#include <cmath>
#include <sstream>

#include "omrr/data.hpp"
#include "omrr/rng.hpp"

using namespace omrr;
using data::GridSpec;
using data::TripRecord;

namespace {

GridSpec test_grid() { return {40.0, -74.0, 0.15, 8, 8}; }

std::string compact_row(const std::string& license, std::int64_t pickup,
                        std::int64_t dropoff, double secs, double plat, double plon,
                        double dlat, double dlon) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%lld,%lld,%.1f,%.6f,%.6f,%.6f,%.6f\n",
                  license.c_str(), static_cast<long long>(pickup),
                  static_cast<long long>(dropoff), secs, plat, plon, dlat, dlon);
    return buf;
}

}  // namespace

TEST_CASE("grid cells are half-open with boundaries rounding up") {
    // An exactly representable cell size keeps the boundary test crisp.
    const GridSpec grid{40.0, -74.0, 0.25, 8, 8};
    CHECK(grid.lat_cell(40.0) == 0);
    CHECK(grid.lon_cell(-74.0) == 0);
    CHECK(grid.lat_cell(40.249999) == 0);
    CHECK(grid.lat_cell(40.25) == 1);  // exactly on the boundary
    CHECK(grid.lat_cell(40.50) == 2);
    CHECK(grid.lat_cell(39.99) == -1);
}

TEST_CASE("compact rows parse and map to sorted cell-pair types") {
    std::stringstream in;
    in << "license,pickup_datetime,dropoff_datetime,trip_seconds,pickup_lat,"
          "pickup_lon,dropoff_lat,dropoff_lon\n";
    in << compact_row("A", 100, 700, 600, 40.0, -74.0, 40.31, -73.69);
    in << compact_row("B", 90000, 90600, 600, 40.0, -74.0, 40.31, -73.69);
    in << compact_row("A", 200, 500, 300, 40.2, -73.9, 40.0, -74.0);
    in << "garbage,row\n";
    in << compact_row("C", 300, 900, 600, 55.0, -74.0, 40.0, -74.0);  // outside

    const auto parsed = data::parse_trips(in, test_grid());
    CHECK(parsed.records.size() == 3);
    CHECK(parsed.malformed == 1);
    CHECK(parsed.out_of_box == 1);
    REQUIRE(parsed.types.size() == 2);  // distinct cell pairs
    CHECK(parsed.type_of[0] == parsed.type_of[1]);
    CHECK(parsed.type_of[0] != parsed.type_of[2]);
    const auto& key = parsed.types[parsed.type_of[0]];
    CHECK(key.pickup.lat == 0);
    CHECK(key.pickup.lon == 0);
    CHECK(key.dropoff.lat == 2);
    CHECK(key.dropoff.lon == 2);
}

TEST_CASE("the 2013 fourteen-column layout is accepted") {
    std::stringstream in;
    in << "medallion,hack_license,vendor_id,rate_code,store_and_fwd_flag,"
          "pickup_datetime,dropoff_datetime,passenger_count,trip_time_in_secs,"
          "trip_distance,pickup_longitude,pickup_latitude,dropoff_longitude,"
          "dropoff_latitude\n";
    in << "M1,HL9,VTS,1,N,2013-01-01 00:05:00,2013-01-01 00:15:00,1,600,2.1,"
          "-73.95,40.16,-73.8,40.31\n";
    const auto parsed = data::parse_trips(in, test_grid());
    REQUIRE(parsed.records.size() == 1);
    CHECK(parsed.records[0].license == "HL9");
    CHECK(parsed.records[0].trip_seconds == 600.0);
    CHECK(parsed.records[0].pickup_lat == doctest::Approx(40.16));
    CHECK(parsed.records[0].pickup_lon == doctest::Approx(-73.95));
    // 2013-01-01 00:05 UTC in unix seconds
    CHECK(parsed.records[0].pickup_time == 1356998700);
    CHECK(parsed.types.size() == 1);
}

TEST_CASE("dropoff before pickup is malformed") {
    std::stringstream in;
    in << compact_row("A", 1000, 400, 600, 40.0, -74.0, 40.3, -73.7);
    const auto parsed = data::parse_trips(in, test_grid());
    CHECK(parsed.records.empty());
    // the first line is never counted against the data (header tolerance)
    CHECK(parsed.malformed == 0);

    std::stringstream in2;
    in2 << compact_row("A", 100, 700, 600, 40.0, -74.0, 40.3, -73.7);
    in2 << compact_row("B", 1000, 400, 600, 40.0, -74.0, 40.3, -73.7);
    const auto parsed2 = data::parse_trips(in2, test_grid());
    CHECK(parsed2.records.size() == 1);
    CHECK(parsed2.malformed == 1);
}

TEST_CASE("appearance counts divide by the day count") {
    // Six appearances of one (type, round) across twelve days.
    std::vector<TripRecord> records;
    for (int day = 0; day < 12; ++day) {
        TripRecord rec;
        rec.license = "A";
        rec.pickup_time = day * 86400 + 3 * 300 + 10;  // round 4
        rec.dropoff_time = rec.pickup_time + 600;
        rec.trip_seconds = 600;
        rec.pickup_lat = 40.01;
        rec.pickup_lon = -73.99;
        rec.dropoff_lat = 40.31;
        rec.dropoff_lon = -73.69;
        if (day < 6) records.push_back(rec);
        rec.pickup_time = day * 86400 + 100 * 300;  // keep every day populated
        rec.dropoff_time = rec.pickup_time + 300;
        rec.trip_seconds = 300;
        records.push_back(rec);
    }
    const auto parsed = data::assign_types(std::move(records), test_grid());
    const auto est = data::estimate_arrivals(parsed, 288);
    CHECK(est.days == 12);
    CHECK(est.kad_rate(0, 4) == doctest::Approx(0.5));   // 6 / 12
    CHECK(est.kad_rate(0, 5) == doctest::Approx(0.0));   // never seen there
    CHECK(est.rescaled_rounds == 0);
}

TEST_CASE("overfull rounds are rescaled onto unit mass and reported") {
    std::vector<TripRecord> records;
    for (int day = 0; day < 2; ++day)
        for (int copy = 0; copy < 3; ++copy) {
            TripRecord rec;
            rec.license = "A";
            rec.pickup_time = day * 86400 + 50;  // all in round 1
            rec.dropoff_time = rec.pickup_time + 300;
            rec.trip_seconds = 300;
            rec.pickup_lat = 40.01 + 0.15 * copy;  // distinct types
            rec.pickup_lon = -73.99;
            rec.dropoff_lat = 40.31;
            rec.dropoff_lon = -73.69;
            records.push_back(rec);
        }
    const auto parsed = data::assign_types(std::move(records), test_grid());
    const auto est = data::estimate_arrivals(parsed, 288);
    CHECK(est.rescaled_rounds == 1);
    double mass = 0.0;
    for (std::uint32_t v = 0; v < parsed.types.size(); ++v)
        mass += est.kad_rate(v, 1);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("flattened rates preserve each type's expected arrivals") {
    rng::Stream s(99);
    std::vector<TripRecord> records;
    for (int day = 0; day < 7; ++day)
        for (int i = 0; i < 40; ++i) {
            TripRecord rec;
            rec.license = "A";
            rec.pickup_time = day * 86400 + static_cast<std::int64_t>(s.below(86400));
            rec.dropoff_time = rec.pickup_time + 300;
            rec.trip_seconds = 300;
            rec.pickup_lat = 40.01 + 0.15 * static_cast<double>(s.below(3));
            rec.pickup_lon = -73.99;
            rec.dropoff_lat = 40.31;
            rec.dropoff_lon = -73.69;
            records.push_back(rec);
        }
    const auto parsed = data::assign_types(std::move(records), test_grid());
    const auto est = data::estimate_arrivals(parsed, 288);
    for (std::uint32_t v = 0; v < parsed.types.size(); ++v) {
        double kad_total = 0.0;
        std::uint64_t count_total = 0;
        for (model::Round t = 1; t <= 288; ++t) {
            kad_total += est.kad_rate(v, t);
            count_total += est.count(v, t);
        }
        const double kiid_total = 288.0 * est.kiid_rate(v);
        CHECK(kiid_total == doctest::Approx(kad_total).epsilon(1e-12));
        CHECK(kad_total ==
              doctest::Approx(static_cast<double>(count_total) / est.days)
                  .epsilon(1e-12));
    }
}

TEST_CASE("a constant sample degenerates to a point mass") {
    const std::vector<double> lengths(40, 2.0);
    const auto fit = data::fit_otd(lengths, data::OtdFamily::normal, 20);
    CHECK(fit.sigma == 0.0);
    CHECK(fit.distribution.pmf(2) == doctest::Approx(1.0));
    CHECK(fit.distribution.mean() == doctest::Approx(2.0));
}

TEST_CASE("a discretized normal peaks beside its mean and sums its tails") {
    const auto otd = data::discretized_normal(2.5, 1.0, 30);
    CHECK(otd.pmf(2) == doctest::Approx(otd.pmf(3)).epsilon(1e-12));
    CHECK(otd.pmf(2) > otd.pmf(1));
    CHECK(otd.pmf(3) > otd.pmf(4));
    double direct = 0.0;
    for (std::uint32_t d = 6; d <= 30; ++d) direct += otd.pmf(d);
    CHECK(otd.tail(5) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(otd.mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a power law with exponent two follows inverse squares") {
    const auto otd = data::power_law(2.0, 4);
    const double z = 1.0 + 0.25 + 1.0 / 9.0 + 1.0 / 16.0;
    CHECK(otd.pmf(1) == doctest::Approx(1.0 / z));
    CHECK(otd.pmf(2) == doctest::Approx(0.25 / z));
    CHECK(otd.pmf(3) == doctest::Approx((1.0 / 9.0) / z));
    CHECK(otd.pmf(4) == doctest::Approx((1.0 / 16.0) / z));
    CHECK(otd.pmf(0) == 0.0);
}

TEST_CASE("the likelihood fit recovers a planted exponent") {
    const auto truth = data::power_law(2.5, 50);
    rng::Stream s(123);
    std::vector<double> lengths;
    for (int i = 0; i < 20000; ++i)
        lengths.push_back(static_cast<double>(truth.sample(s.uniform01())));
    const auto fit = data::fit_otd(lengths, data::OtdFamily::power_law, 50);
    CHECK(std::abs(fit.exponent - 2.5) < 0.1);
}

TEST_CASE("the normal fit recovers a planted mean") {
    const auto truth = data::discretized_normal(3.2, 1.4, 40);
    rng::Stream s(321);
    std::vector<double> lengths;
    const int n = 20000;
    for (int i = 0; i < n; ++i)
        lengths.push_back(static_cast<double>(truth.sample(s.uniform01())));
    const auto fit = data::fit_otd(lengths, data::OtdFamily::normal, 40);
    CHECK(std::abs(fit.mean - truth.mean()) <= 3.0 * fit.sigma / std::sqrt(n));
}

TEST_CASE("matched-mean exponents reproduce the target mean") {
    const double exponent = data::power_law_exponent_for_mean(2.6, 288);
    const auto otd = data::power_law(exponent, 288);
    CHECK(otd.mean() == doctest::Approx(2.6).epsilon(1e-6));
}

TEST_CASE("edge weights clamp the docking penalty at zero") {
    data::TrainedModel m;
    m.grid = test_grid();
    m.horizon = 4;
    // Types: a straight 4-cell trip and a 1-cell trip.
    m.types = {{{0, 0}, {0, 4}}, {{4, 0}, {4, 1}}};
    m.arrivals.horizon = 4;
    m.arrivals.days = 4;
    m.arrivals.counts.assign(2 * 4, 1);
    m.arrivals.round_scale.assign(4, 1.0);
    m.normal_fit.mean = 1.0;
    m.normal_fit.sigma = 0.0;
    m.normal_fit.distribution = data::discretized_normal(1.0, 0.0, 4);
    m.power_law_fit = m.normal_fit;
    m.cars = {"dockA", "dockB"};
    m.docking = {{0, 2}, {4, 5}};  // A is 2 cells from type0 pickup; B is 4 from type1

    data::InstanceOptions opts;
    const auto inst = data::build_experiment_instance(m, opts);
    // weight(dockA, type0) = 4 - 0.5*2 = 3
    bool found_a0 = false;
    for (const auto& e : inst.edges())
        if (inst.resource_name(e.resource) == "dockA" && e.type == 0) {
            CHECK(e.weight == doctest::Approx(3.0));
            found_a0 = true;
        }
    CHECK(found_a0);
    // weight(dockB, type1) = 1 - 0.5*4 < 0: clamped away entirely
    for (const auto& e : inst.edges())
        CHECK_FALSE((inst.resource_name(e.resource) == "dockB" && e.type == 1));

    data::InstanceOptions no_penalty = opts;
    no_penalty.weight_alpha = 0.0;
    const auto inst2 = data::build_experiment_instance(m, no_penalty);
    for (const auto& e : inst2.edges())
        if (e.type == 0) CHECK(e.weight == doctest::Approx(4.0));
}

TEST_CASE("docking picks the majority pickup cell, ties lexicographic") {
    std::vector<TripRecord> records;
    auto add = [&](const std::string& license, double plat) {
        TripRecord rec;
        rec.license = license;
        rec.pickup_time = static_cast<std::int64_t>(records.size()) * 600;
        rec.dropoff_time = rec.pickup_time + 300;
        rec.trip_seconds = 300;
        rec.pickup_lat = plat;
        rec.pickup_lon = -73.99;
        rec.dropoff_lat = 40.31;
        rec.dropoff_lon = -73.69;
        records.push_back(rec);
    };
    add("X", 40.01);  // cell 0
    add("X", 40.16);  // cell 1
    add("X", 40.16);  // majority for X: cell 1
    add("Y", 40.01);  // tie for Y between cells 0 and 1
    add("Y", 40.16);
    const auto parsed = data::assign_types(std::move(records), test_grid());
    data::TrainOptions options;
    options.rounds_per_day = 288;
    const auto model = data::train(parsed, test_grid(), options);
    REQUIRE(model.cars.size() == 2);
    CHECK(model.cars[0] == "X");
    CHECK(model.docking[0].lat == 1);
    CHECK(model.docking[1].lat == 0);  // lexicographically first cell wins the tie
}

TEST_CASE("car selection is a fixed-seed uniform draw") {
    std::vector<TripRecord> records;
    for (int i = 0; i < 50; ++i) {
        TripRecord rec;
        rec.license = "L" + std::to_string(100 + i);
        rec.pickup_time = i * 700;
        rec.dropoff_time = rec.pickup_time + 300;
        rec.trip_seconds = 300;
        rec.pickup_lat = 40.01;
        rec.pickup_lon = -73.99;
        rec.dropoff_lat = 40.31;
        rec.dropoff_lon = -73.69;
        records.push_back(rec);
    }
    const auto parsed = data::assign_types(std::move(records), test_grid());
    data::TrainOptions options;
    options.cars = 30;
    const auto a = data::train(parsed, test_grid(), options);
    const auto b = data::train(parsed, test_grid(), options);
    CHECK(a.cars.size() == 30);
    CHECK(a.cars == b.cars);
    CHECK(std::is_sorted(a.cars.begin(), a.cars.end()));
}

TEST_CASE("the synthetic generator is deterministic and parseable") {
    data::SyntheticScenario sc;
    sc.days = 2;
    sc.rounds_per_day = 96;
    sc.type_pairs = 40;
    sc.peaks = {{30.0, 8.0, 0.5}, {70.0, 8.0, 0.5}};
    sc.seed = 9;
    const auto a = data::synth_trips(sc);
    const auto b = data::synth_trips(sc);
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() > 30);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].license == b[i].license);
        CHECK(a[i].pickup_time == b[i].pickup_time);
        CHECK(a[i].pickup_lat == b[i].pickup_lat);
    }
    std::stringstream csv;
    data::write_trips_csv(csv, a);
    const auto parsed = data::parse_trips(csv, sc.grid);
    CHECK(parsed.records.size() == a.size());
    CHECK(parsed.malformed == 0);
    CHECK(parsed.out_of_box == 0);

    sc.seed = 10;
    const auto c = data::synth_trips(sc);
    bool different = c.size() != a.size();
    for (std::size_t i = 0; !different && i < std::min(a.size(), c.size()); ++i)
        different = a[i].pickup_time != c[i].pickup_time;
    CHECK(different);
}

TEST_CASE("estimation recovers the synthetic ground truth at four sigma") {
    data::SyntheticScenario sc;
    sc.grid = {40.0, -74.0, 0.15, 3, 3};
    sc.days = 200;
    sc.rounds_per_day = 48;
    sc.type_pairs = 20;
    sc.cars = 6;
    sc.base_rate = 0.10;
    sc.peaks = {{24.0, 6.0, 0.5}};
    sc.seed = 4242;
    const auto records = data::synth_trips(sc);
    const auto parsed = data::assign_types(records, sc.grid);
    const auto est = data::estimate_arrivals(parsed, sc.rounds_per_day);
    REQUIRE(est.days == 200);

    // Reconstruct the generator's pair popularity and intensity profile.
    rng::Stream stream(rng::derive(sc.seed, 0x5E17));
    std::vector<data::CellIndex> cells;
    for (std::int32_t i = 0; i < sc.grid.extent_lat; ++i)
        for (std::int32_t j = 0; j < sc.grid.extent_lon; ++j) cells.push_back({i, j});
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
        const auto j = i + static_cast<std::size_t>(stream.below(cells.size() - i));
        std::swap(cells[i], cells[j]);
    }
    std::vector<std::pair<data::CellIndex, data::CellIndex>> pairs;
    for (const auto& a : cells)
        for (const auto& b : cells)
            if (!(a == b)) pairs.emplace_back(a, b);
    for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
        const auto j = i + static_cast<std::size_t>(stream.below(pairs.size() - i));
        std::swap(pairs[i], pairs[j]);
    }
    pairs.resize(sc.type_pairs);
    std::vector<double> weight(sc.type_pairs);
    double total = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        weight[i] = std::pow(static_cast<double>(i + 1), -sc.popularity_skew);
        total += weight[i];
    }
    for (auto& w : weight) w /= total;

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const data::TypeKey key{pairs[i].first, pairs[i].second};
        const auto it = std::lower_bound(parsed.types.begin(), parsed.types.end(), key);
        if (it == parsed.types.end() || !(*it == key)) continue;  // never drawn
        const auto v = static_cast<std::uint32_t>(it - parsed.types.begin());
        for (model::Round t = 1; t <= sc.rounds_per_day; ++t) {
            double lambda = sc.base_rate;
            for (const auto& peak : sc.peaks) {
                const double z = (static_cast<double>(t - 1) - peak.center) / peak.width;
                lambda += peak.added_rate * std::exp(-0.5 * z * z);
            }
            lambda = std::min(lambda, 0.95);
            const double truth = lambda * weight[i];
            const double se = std::sqrt(truth * (1 - truth) / sc.days);
            CHECK(std::abs(est.kad_rate(v, t) - truth) <= 4.0 * se + 4.0 / sc.days);
        }
    }
}

TEST_CASE("trips crossing midnight are counted as truncated") {
    std::vector<TripRecord> records;
    TripRecord rec;
    rec.license = "A";
    rec.pickup_time = 86400 - 200;  // late on day 0
    rec.dropoff_time = 86400 + 700; // ends on day 1
    rec.trip_seconds = 900;
    rec.pickup_lat = 40.01;
    rec.pickup_lon = -73.99;
    rec.dropoff_lat = 40.31;
    rec.dropoff_lon = -73.69;
    records.push_back(rec);
    rec.pickup_time = 1000;  // well inside day 0
    rec.dropoff_time = 1600;
    rec.trip_seconds = 600;
    records.push_back(rec);
    const auto parsed = data::assign_types(std::move(records), test_grid());
    const auto est = data::estimate_arrivals(parsed, 288);
    CHECK(est.truncated_trips == 1);
    CHECK(est.count(parsed.type_of[0], 288) == 1);  // assigned to the pickup day
}

TEST_CASE("flattened-arrival instances share one stationary rate vector") {
    data::SyntheticScenario sc;
    sc.grid = {40.0, -74.0, 0.15, 4, 4};
    sc.days = 5;
    sc.rounds_per_day = 48;
    sc.type_pairs = 25;
    sc.cars = 6;
    const auto parsed = data::assign_types(data::synth_trips(sc), sc.grid);
    data::TrainOptions options;
    options.rounds_per_day = sc.rounds_per_day;
    options.cars = 6;
    const auto model = data::train(parsed, sc.grid, options);

    data::InstanceOptions kiid;
    kiid.arrival_mode = data::ArrivalMode::kiid;
    const auto inst = data::build_experiment_instance(model, kiid);
    CHECK(inst.arrivals().mode() == model::ArrivalProcess::Mode::stationary);
    for (model::Round t = 2; t <= inst.horizon(); ++t)
        CHECK(inst.arrivals().rate(0, t) == inst.arrivals().rate(0, 1));

    // Total expected arrivals per type match the time-varying build.
    data::InstanceOptions kad;
    const auto inst2 = data::build_experiment_instance(model, kad);
    for (model::TypeId v = 0; v < inst.num_types(); ++v) {
        double kad_total = 0.0;
        for (model::Round t = 1; t <= inst2.horizon(); ++t)
            kad_total += inst2.arrivals().rate(v, t);
        const double kiid_total =
            static_cast<double>(inst.horizon()) * inst.arrivals().rate(v, 1);
        CHECK(kiid_total == doctest::Approx(kad_total).epsilon(1e-9));
    }
}
