#include "omrr/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "omrr/rng.hpp"

namespace omrr::data {

namespace {

constexpr double kSecondsPerDay = 86400.0;

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097LL + static_cast<int>(doe) - 719468;
}

bool parse_timestamp(const std::string& field, std::int64_t& out) {
    if (field.empty()) return false;
    // "YYYY-MM-DD HH:MM:SS"
    if (field.size() == 19 && field[4] == '-' && field[7] == '-' &&
        (field[10] == ' ' || field[10] == 'T') && field[13] == ':' &&
        field[16] == ':') {
        const int y = std::atoi(field.substr(0, 4).c_str());
        const int mo = std::atoi(field.substr(5, 2).c_str());
        const int d = std::atoi(field.substr(8, 2).c_str());
        const int h = std::atoi(field.substr(11, 2).c_str());
        const int mi = std::atoi(field.substr(14, 2).c_str());
        const int s = std::atoi(field.substr(17, 2).c_str());
        if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60)
            return false;
        out = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) *
                  86400LL +
              h * 3600LL + mi * 60LL + s;
        return true;
    }
    char* end = nullptr;
    const long long v = std::strtoll(field.c_str(), &end, 10);
    if (end == nullptr || *end != '\0') return false;
    out = v;
    return true;
}

bool parse_number(const std::string& field, double& out) {
    if (field.empty()) return false;
    char* end = nullptr;
    out = std::strtod(field.c_str(), &end);
    return end != nullptr && *end == '\0' && std::isfinite(out);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    for (auto& f : fields) {
        while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
        std::size_t b = 0;
        while (b < f.size() && f[b] == ' ') ++b;
        if (b) f.erase(0, b);
    }
    return fields;
}

bool record_from_fields(const std::vector<std::string>& f, TripRecord& rec) {
    if (f.size() == 14) {
        // 2013 trip-data order; the driver license keys the car and the
        // coordinate columns come longitude first.
        rec.license = f[1];
        double lon1, lat1, lon2, lat2, secs;
        if (!parse_timestamp(f[5], rec.pickup_time)) return false;
        if (!parse_timestamp(f[6], rec.dropoff_time)) return false;
        if (!parse_number(f[8], secs)) return false;
        if (!parse_number(f[10], lon1) || !parse_number(f[11], lat1)) return false;
        if (!parse_number(f[12], lon2) || !parse_number(f[13], lat2)) return false;
        rec.trip_seconds = secs;
        rec.pickup_lon = lon1;
        rec.pickup_lat = lat1;
        rec.dropoff_lon = lon2;
        rec.dropoff_lat = lat2;
        return !rec.license.empty();
    }
    if (f.size() == 8) {
        rec.license = f[0];
        if (!parse_timestamp(f[1], rec.pickup_time)) return false;
        if (!parse_timestamp(f[2], rec.dropoff_time)) return false;
        if (!parse_number(f[3], rec.trip_seconds)) return false;
        if (!parse_number(f[4], rec.pickup_lat)) return false;
        if (!parse_number(f[5], rec.pickup_lon)) return false;
        if (!parse_number(f[6], rec.dropoff_lat)) return false;
        if (!parse_number(f[7], rec.dropoff_lon)) return false;
        return !rec.license.empty();
    }
    return false;
}

double cell_distance(const CellIndex& a, const CellIndex& b, DistanceMetric metric) {
    const double dl = static_cast<double>(a.lat) - b.lat;
    const double dn = static_cast<double>(a.lon) - b.lon;
    if (metric == DistanceMetric::manhattan) return std::abs(dl) + std::abs(dn);
    return std::sqrt(dl * dl + dn * dn);
}

std::string type_name(const TypeKey& key) {
    return "t" + std::to_string(key.pickup.lat) + "." + std::to_string(key.pickup.lon) +
           "-" + std::to_string(key.dropoff.lat) + "." + std::to_string(key.dropoff.lon);
}

}  // namespace

std::int32_t GridSpec::lat_cell(double lat) const {
    return static_cast<std::int32_t>(std::floor((lat - origin_lat) / cell_size));
}

std::int32_t GridSpec::lon_cell(double lon) const {
    return static_cast<std::int32_t>(std::floor((lon - origin_lon) / cell_size));
}

ParsedTrips assign_types(std::vector<TripRecord> records, const GridSpec& grid) {
    ParsedTrips out;
    std::vector<TypeKey> keys;
    for (auto& rec : records) {
        const CellIndex pickup{grid.lat_cell(rec.pickup_lat), grid.lon_cell(rec.pickup_lon)};
        const CellIndex dropoff{grid.lat_cell(rec.dropoff_lat),
                                grid.lon_cell(rec.dropoff_lon)};
        if (!grid.in_bounds(pickup.lat, pickup.lon) ||
            !grid.in_bounds(dropoff.lat, dropoff.lon)) {
            ++out.out_of_box;
            continue;
        }
        out.records.push_back(std::move(rec));
        keys.push_back({pickup, dropoff});
    }
    // Stable, data-independent type ids: sort the distinct cell pairs.
    out.types = keys;
    std::sort(out.types.begin(), out.types.end());
    out.types.erase(std::unique(out.types.begin(), out.types.end()), out.types.end());
    out.type_of.resize(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
        out.type_of[i] = static_cast<std::uint32_t>(
            std::lower_bound(out.types.begin(), out.types.end(), keys[i]) -
            out.types.begin());
    return out;
}

ParsedTrips parse_trips(std::istream& in, const GridSpec& grid) {
    std::vector<TripRecord> records;
    std::uint64_t malformed = 0;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TripRecord rec;
        const bool ok = record_from_fields(split_csv(line), rec) &&
                        rec.dropoff_time >= rec.pickup_time &&
                        rec.trip_seconds >= 0.0;
        if (!ok) {
            if (!first) ++malformed;  // a leading header is tolerated
            first = false;
            continue;
        }
        first = false;
        records.push_back(std::move(rec));
    }
    ParsedTrips out = assign_types(std::move(records), grid);
    out.malformed = malformed;
    return out;
}

double ArrivalEstimate::kad_rate(std::uint32_t v, Round t) const {
    return round_scale[t - 1] * static_cast<double>(count(v, t)) /
           static_cast<double>(days);
}

double ArrivalEstimate::kiid_rate(std::uint32_t v) const {
    std::uint64_t total = 0;
    for (Round t = 1; t <= horizon; ++t) total += count(v, t);
    return kiid_scale * static_cast<double>(total) /
           (static_cast<double>(days) * static_cast<double>(horizon));
}

ArrivalEstimate estimate_arrivals(const ParsedTrips& trips, Round rounds_per_day) {
    if (rounds_per_day == 0) throw std::invalid_argument("need at least one round");
    if (trips.records.empty()) throw std::invalid_argument("no trips to estimate from");

    ArrivalEstimate est;
    est.horizon = rounds_per_day;
    const std::size_t num_types = trips.types.size();
    est.counts.assign(num_types * rounds_per_day, 0);

    std::vector<std::int64_t> days;
    for (std::size_t i = 0; i < trips.records.size(); ++i) {
        const TripRecord& rec = trips.records[i];
        const std::int64_t day = rec.pickup_time >= 0
                                     ? rec.pickup_time / 86400
                                     : (rec.pickup_time - 86399) / 86400;
        const std::int64_t sec = rec.pickup_time - day * 86400;
        const Round r = static_cast<Round>(
            std::min<std::int64_t>(rounds_per_day - 1,
                                   sec * rounds_per_day / 86400));
        ++est.counts[static_cast<std::size_t>(trips.type_of[i]) * rounds_per_day + r];
        days.push_back(day);
        if (rec.dropoff_time > (day + 1) * 86400) ++est.truncated_trips;
    }
    std::sort(days.begin(), days.end());
    days.erase(std::unique(days.begin(), days.end()), days.end());
    est.days = static_cast<std::uint32_t>(days.size());

    est.round_scale.assign(rounds_per_day, 1.0);
    for (Round r = 0; r < rounds_per_day; ++r) {
        std::uint64_t round_total = 0;
        for (std::size_t v = 0; v < num_types; ++v)
            round_total += est.counts[v * rounds_per_day + r];
        const double mass = static_cast<double>(round_total) / est.days;
        if (mass > 1.0) {
            est.round_scale[r] = 1.0 / mass;
            ++est.rescaled_rounds;
        }
    }
    const double total_mass =
        static_cast<double>(trips.records.size()) /
        (static_cast<double>(est.days) * static_cast<double>(rounds_per_day));
    if (total_mass > 1.0) est.kiid_scale = 1.0 / total_mass;
    return est;
}

model::OccupationDistribution discretized_normal(double mu, double sigma, Round horizon) {
    std::vector<double> pmf(horizon + 1, 0.0);
    if (sigma < 1e-9) {
        const auto d = static_cast<Round>(
            std::clamp<long long>(std::llround(mu), 1, horizon));
        pmf[d] = 1.0;
        return model::OccupationDistribution(std::move(pmf));
    }
    for (Round d = 1; d <= horizon; ++d) {
        const double z = (static_cast<double>(d) - mu) / sigma;
        pmf[d] = std::exp(-0.5 * z * z);
    }
    return model::OccupationDistribution(std::move(pmf)).normalized();
}

model::OccupationDistribution power_law(double exponent, Round horizon) {
    std::vector<double> pmf(horizon + 1, 0.0);
    for (Round d = 1; d <= horizon; ++d)
        pmf[d] = std::pow(static_cast<double>(d), -exponent);
    return model::OccupationDistribution(std::move(pmf)).normalized();
}

double power_law_exponent_for_mean(double mean, Round horizon) {
    if (mean <= 1.0) return 16.0;
    auto mean_of = [&](double g) { return power_law(g, horizon).mean(); };
    double lo = -4.0, hi = 16.0;  // mean_of decreases in the exponent
    if (mean >= mean_of(lo)) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mean_of(mid) >= mean)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

OtdFit fit_otd(std::span<const double> lengths, OtdFamily family, Round horizon) {
    if (lengths.empty()) throw std::invalid_argument("no trip lengths to fit");
    OtdFit fit;
    fit.family = family;
    fit.samples = lengths.size();
    double sum = 0.0;
    for (double x : lengths) sum += x;
    fit.mean = sum / static_cast<double>(lengths.size());
    double ss = 0.0;
    for (double x : lengths) ss += (x - fit.mean) * (x - fit.mean);
    fit.sigma = lengths.size() >= 2
                    ? std::sqrt(ss / (static_cast<double>(lengths.size()) - 1.0))
                    : 0.0;

    if (family == OtdFamily::normal) {
        fit.distribution = discretized_normal(fit.mean, fit.sigma, horizon);
        return fit;
    }

    // Discrete maximum likelihood for d^-g on {1..horizon}; the
    // log-likelihood is concave in g, so a ternary search converges.
    double sum_log = 0.0;
    for (double x : lengths) {
        const auto d = static_cast<Round>(
            std::clamp<long long>(std::llround(x), 1, horizon));
        sum_log += std::log(static_cast<double>(d));
    }
    const double n = static_cast<double>(lengths.size());
    auto log_likelihood = [&](double g) {
        double z = 0.0;
        for (Round d = 1; d <= horizon; ++d)
            z += std::pow(static_cast<double>(d), -g);
        return -g * sum_log - n * std::log(z);
    };
    double lo = 1e-3, hi = 16.0;
    for (int it = 0; it < 160; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (log_likelihood(m1) < log_likelihood(m2))
            lo = m1;
        else
            hi = m2;
    }
    fit.exponent = 0.5 * (lo + hi);
    fit.distribution = power_law(fit.exponent, horizon);
    return fit;
}

TrainedModel train(const ParsedTrips& trips, const GridSpec& grid,
                   const TrainOptions& options) {
    TrainedModel model;
    model.grid = grid;
    model.horizon = options.rounds_per_day;
    model.types = trips.types;
    model.malformed = trips.malformed;
    model.out_of_box = trips.out_of_box;
    model.arrivals = estimate_arrivals(trips, options.rounds_per_day);

    const double round_seconds = kSecondsPerDay / options.rounds_per_day;
    std::vector<double> lengths;
    lengths.reserve(trips.records.size());
    for (const TripRecord& rec : trips.records)
        lengths.push_back(std::min(rec.trip_seconds / round_seconds,
                                   static_cast<double>(options.rounds_per_day)));
    model.normal_fit = fit_otd(lengths, OtdFamily::normal, options.rounds_per_day);
    model.power_law_fit = fit_otd(lengths, OtdFamily::power_law, options.rounds_per_day);

    // Pickup-cell tallies per license for docking positions.
    std::map<std::string, std::map<CellIndex, std::uint64_t>> pickup_cells;
    for (std::size_t i = 0; i < trips.records.size(); ++i) {
        const TripRecord& rec = trips.records[i];
        pickup_cells[rec.license][trips.types[trips.type_of[i]].pickup]++;
    }
    std::vector<std::string> licenses;
    licenses.reserve(pickup_cells.size());
    for (const auto& [license, cells] : pickup_cells) licenses.push_back(license);

    if (licenses.size() > options.cars) {
        rng::Stream stream(options.car_seed);
        for (std::uint32_t i = 0; i < options.cars; ++i) {
            const auto j =
                i + static_cast<std::size_t>(stream.below(licenses.size() - i));
            std::swap(licenses[i], licenses[j]);
        }
        licenses.resize(options.cars);
        std::sort(licenses.begin(), licenses.end());
    }
    model.cars = licenses;
    model.docking.reserve(licenses.size());
    for (const auto& license : licenses) {
        const auto& cells = pickup_cells.at(license);
        CellIndex best = cells.begin()->first;
        std::uint64_t best_count = cells.begin()->second;
        for (const auto& [cell, count] : cells)
            if (count > best_count) {  // ties keep the lexicographically first
                best = cell;
                best_count = count;
            }
        model.docking.push_back(best);
    }
    return model;
}

model::Instance build_experiment_instance(const TrainedModel& model,
                                          const InstanceOptions& options) {
    if (model.cars.empty()) throw std::invalid_argument("trained model has no cars");
    model::InstanceSpec spec;
    spec.horizon = model.horizon;
    spec.resources = model.cars;
    spec.request_types.reserve(model.types.size());
    for (const TypeKey& key : model.types) spec.request_types.push_back(type_name(key));

    for (std::uint32_t v = 0; v < model.types.size(); ++v) {
        const TypeKey& key = model.types[v];
        const double trip_len =
            cell_distance(key.pickup, key.dropoff, options.metric);
        for (std::uint32_t u = 0; u < model.cars.size(); ++u) {
            const double dock =
                cell_distance(model.docking[u], key.pickup, options.metric);
            const double w = trip_len - options.weight_alpha * dock;
            if (w > 0.0) spec.edges.push_back({u, v, w});
        }
    }

    if (options.arrival_mode == ArrivalMode::kad) {
        std::vector<std::vector<double>> rates(model.horizon);
        for (Round t = 1; t <= model.horizon; ++t) {
            rates[t - 1].resize(model.types.size());
            for (std::uint32_t v = 0; v < model.types.size(); ++v)
                rates[t - 1][v] = model.arrivals.kad_rate(v, t);
        }
        spec.arrivals = model::ArrivalProcess::dense(std::move(rates));
    } else {
        std::vector<double> rates(model.types.size());
        for (std::uint32_t v = 0; v < model.types.size(); ++v)
            rates[v] = model.arrivals.kiid_rate(v);
        spec.arrivals = model::ArrivalProcess::stationary(std::move(rates), model.horizon);
    }

    model::OccupationDistribution otd;
    if (options.otd_family == OtdFamily::normal) {
        otd = model.normal_fit.distribution;
    } else if (options.match_power_law_mean) {
        otd = power_law(
            power_law_exponent_for_mean(model.normal_fit.distribution.mean(),
                                        model.horizon),
            model.horizon);
    } else {
        otd = model.power_law_fit.distribution;
    }
    spec.occupation = model::OccupationMap::shared(std::move(otd), spec.edges.size());
    return model::Instance::build(std::move(spec));
}

std::vector<TripRecord> synth_trips(const SyntheticScenario& sc) {
    if (sc.grid.extent_lat < 2 || sc.grid.extent_lon < 2)
        throw std::invalid_argument("synthetic grid needs at least 2x2 cells");
    rng::Stream stream(rng::derive(sc.seed, 0x5E17));

    // Car homes: shuffled grid cells assigned round-robin.
    std::vector<CellIndex> cells;
    for (std::int32_t i = 0; i < sc.grid.extent_lat; ++i)
        for (std::int32_t j = 0; j < sc.grid.extent_lon; ++j) cells.push_back({i, j});
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
        const auto j = i + static_cast<std::size_t>(stream.below(cells.size() - i));
        std::swap(cells[i], cells[j]);
    }
    struct Car {
        std::string license;
        CellIndex home;
    };
    std::vector<Car> cars(sc.cars);
    for (std::uint32_t c = 0; c < sc.cars; ++c) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "CAR%04u", c);
        cars[c] = {buf, cells[c % cells.size()]};
    }

    // Popular ordered cell pairs with rank-skewed weights.
    std::vector<std::pair<CellIndex, CellIndex>> pairs;
    for (const CellIndex& a : cells)
        for (const CellIndex& b : cells)
            if (!(a == b)) pairs.emplace_back(a, b);
    for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
        const auto j = i + static_cast<std::size_t>(stream.below(pairs.size() - i));
        std::swap(pairs[i], pairs[j]);
    }
    const std::size_t support = std::min<std::size_t>(sc.type_pairs, pairs.size());
    pairs.resize(support);
    std::vector<double> pair_cum(support);
    double total_weight = 0.0;
    for (std::size_t i = 0; i < support; ++i) {
        total_weight += std::pow(static_cast<double>(i + 1), -sc.popularity_skew);
        pair_cum[i] = total_weight;
    }
    for (double& c : pair_cum) c /= total_weight;

    auto intensity = [&](Round r) {
        double rate = sc.base_rate;
        for (const auto& peak : sc.peaks) {
            const double z = (static_cast<double>(r) - peak.center) / peak.width;
            rate += peak.added_rate * std::exp(-0.5 * z * z);
        }
        return std::min(rate, 0.95);
    };

    const double round_seconds = kSecondsPerDay / sc.rounds_per_day;
    std::vector<TripRecord> records;
    for (std::uint32_t day = 0; day < sc.days; ++day) {
        for (Round r = 0; r < sc.rounds_per_day; ++r) {
            if (stream.uniform01() >= intensity(r)) continue;
            const double pu = stream.uniform01();
            const std::size_t pick = static_cast<std::size_t>(
                std::lower_bound(pair_cum.begin(), pair_cum.end(), pu) -
                pair_cum.begin());
            const auto& [from, to] = pairs[std::min(pick, support - 1)];

            // Cars near the pickup serve it more often.
            double car_total = 0.0;
            for (const Car& car : cars) {
                const double d = cell_distance(car.home, from, DistanceMetric::euclidean);
                car_total += 1.0 / ((1.0 + d) * (1.0 + d));
            }
            double cu = stream.uniform01() * car_total;
            std::size_t chosen = cars.size() - 1;
            for (std::size_t c = 0; c < cars.size(); ++c) {
                const double d =
                    cell_distance(cars[c].home, from, DistanceMetric::euclidean);
                cu -= 1.0 / ((1.0 + d) * (1.0 + d));
                if (cu < 0.0) {
                    chosen = c;
                    break;
                }
            }

            double length_rounds;
            if (sc.otd_family == OtdFamily::normal) {
                const double u1 = std::max(stream.uniform01(), 1e-12);
                const double u2 = stream.uniform01();
                const double gauss = std::sqrt(-2.0 * std::log(u1)) *
                                     std::cos(2.0 * 3.14159265358979323846 * u2);
                length_rounds = std::max(0.5, sc.otd_mean + sc.otd_sigma * gauss);
            } else {
                const double exponent =
                    sc.otd_exponent > 0.0
                        ? sc.otd_exponent
                        : power_law_exponent_for_mean(sc.otd_mean, sc.rounds_per_day);
                length_rounds = static_cast<double>(
                    power_law(exponent, sc.rounds_per_day).sample(stream.uniform01()));
            }
            length_rounds = std::min(length_rounds,
                                     static_cast<double>(sc.rounds_per_day));

            TripRecord rec;
            rec.license = cars[chosen].license;
            rec.pickup_time = static_cast<std::int64_t>(day) * 86400 +
                              static_cast<std::int64_t>(r * round_seconds) +
                              static_cast<std::int64_t>(stream.uniform01() *
                                                        (round_seconds - 1.0));
            rec.trip_seconds = length_rounds * round_seconds;
            rec.dropoff_time =
                rec.pickup_time + static_cast<std::int64_t>(rec.trip_seconds);
            auto jitter = [&](const CellIndex& cell, double& lat, double& lon) {
                lat = sc.grid.origin_lat +
                      (cell.lat + 0.1 + 0.8 * stream.uniform01()) * sc.grid.cell_size;
                lon = sc.grid.origin_lon +
                      (cell.lon + 0.1 + 0.8 * stream.uniform01()) * sc.grid.cell_size;
            };
            jitter(from, rec.pickup_lat, rec.pickup_lon);
            jitter(to, rec.dropoff_lat, rec.dropoff_lon);
            records.push_back(std::move(rec));
        }
    }
    return records;
}

void write_trips_csv(std::ostream& os, std::span<const TripRecord> records) {
    os << "license,pickup_datetime,dropoff_datetime,trip_seconds,"
          "pickup_lat,pickup_lon,dropoff_lat,dropoff_lon\n";
    char buf[256];
    for (const TripRecord& rec : records) {
        std::snprintf(buf, sizeof(buf), "%s,%lld,%lld,%.3f,%.8f,%.8f,%.8f,%.8f\n",
                      rec.license.c_str(), static_cast<long long>(rec.pickup_time),
                      static_cast<long long>(rec.dropoff_time), rec.trip_seconds,
                      rec.pickup_lat, rec.pickup_lon, rec.dropoff_lat,
                      rec.dropoff_lon);
        os << buf;
    }
}

}  // namespace omrr::data
