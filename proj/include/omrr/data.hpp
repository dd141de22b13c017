#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omrr/model.hpp"

namespace omrr::data {

using model::Round;

struct TripRecord {
    std::string license;
    std::int64_t pickup_time = 0;   // unix seconds
    std::int64_t dropoff_time = 0;  // unix seconds
    double trip_seconds = 0.0;
    double pickup_lat = 0.0, pickup_lon = 0.0;
    double dropoff_lat = 0.0, dropoff_lon = 0.0;
};

// Square grid over (lat, lon); cells are half-open, so a coordinate exactly
// on a boundary belongs to the higher-index cell. extent_* bound the grid;
// records falling outside are flagged.
struct GridSpec {
    double origin_lat = 0.0;
    double origin_lon = 0.0;
    double cell_size = 0.15;  // degrees
    std::int32_t extent_lat = 64;
    std::int32_t extent_lon = 64;

    std::int32_t lat_cell(double lat) const;
    std::int32_t lon_cell(double lon) const;
    bool in_bounds(std::int32_t clat, std::int32_t clon) const {
        return clat >= 0 && clat < extent_lat && clon >= 0 && clon < extent_lon;
    }
};

struct CellIndex {
    std::int32_t lat = 0;
    std::int32_t lon = 0;
    auto operator<=>(const CellIndex&) const = default;
};

// A request type is a (pickup cell, dropoff cell) pair.
struct TypeKey {
    CellIndex pickup, dropoff;
    auto operator<=>(const TypeKey&) const = default;
};

struct ParsedTrips {
    std::vector<TripRecord> records;       // in-bounds, well-formed records
    std::vector<std::uint32_t> type_of;    // per record
    std::vector<TypeKey> types;            // type id -> cell pair, sorted
    std::uint64_t malformed = 0;           // rows skipped (bad fields)
    std::uint64_t out_of_box = 0;          // rows flagged outside the grid
};

// Comma-separated records, header tolerated. Two layouts are accepted by
// column count: the 14-column 2013 NYC trip-data order (the driver license is
// the car key and coordinates come as lon,lat) and the compact 8-column form
//   license,pickup_datetime,dropoff_datetime,trip_seconds,
//   pickup_lat,pickup_lon,dropoff_lat,dropoff_lon
// with timestamps either "YYYY-MM-DD HH:MM:SS" or unix seconds.
ParsedTrips parse_trips(std::istream& in, const GridSpec& grid);

// Same grid mapping and type assignment for records already in memory (e.g.
// straight from the synthetic generator).
ParsedTrips assign_types(std::vector<TripRecord> records, const GridSpec& grid);

// Integer appearance counts per (type, round) across D days, plus derived
// arrival rates. Rates are c/D; rounds whose total mass exceeds 1 are scaled
// back proportionally and reported.
struct ArrivalEstimate {
    Round horizon = 0;
    std::uint32_t days = 0;
    std::vector<std::uint32_t> counts;        // v * horizon + r
    std::vector<double> round_scale;          // per-round factor (1 = untouched)
    std::uint64_t rescaled_rounds = 0;
    std::uint64_t truncated_trips = 0;        // dropoff past the pickup day

    std::uint32_t count(std::uint32_t v, Round t) const {
        return counts[static_cast<std::size_t>(v) * horizon + (t - 1)];
    }
    // Time-varying rate p_{v,t} = scale_t * c_{v,t} / D.
    double kad_rate(std::uint32_t v, Round t) const;
    // Flattened rate p_v = (sum_t c_{v,t} / D) / T, identical across rounds.
    double kiid_rate(std::uint32_t v) const;
    double kiid_scale = 1.0;  // applied if even the flattened mass overflows
};

ArrivalEstimate estimate_arrivals(const ParsedTrips& trips, Round rounds_per_day);

enum class OtdFamily { normal, power_law };

struct OtdFit {
    OtdFamily family = OtdFamily::normal;
    double mean = 0.0;      // sample mean of the lengths (rounds)
    double sigma = 0.0;     // sample standard deviation
    double exponent = 0.0;  // power-law MLE exponent (0 for normal)
    std::uint64_t samples = 0;
    model::OccupationDistribution distribution;
};

// lengths are trip durations in rounds (possibly fractional). The normal fit
// discretizes exp(-(d-mu)^2 / 2 sigma^2) on {1..T} (a point mass when the
// sample variance vanishes); the power-law fit maximizes the discrete
// likelihood of d^-g on {1..T} over g.
OtdFit fit_otd(std::span<const double> lengths, OtdFamily family, Round horizon);

// Distribution builders shared by the fitters and the experiment setup.
model::OccupationDistribution discretized_normal(double mu, double sigma, Round horizon);
model::OccupationDistribution power_law(double exponent, Round horizon);
// Exponent whose discrete power law on {1..T} has the given mean; used to
// compare occupation families at matched means.
double power_law_exponent_for_mean(double mean, Round horizon);

struct TrainedModel {
    GridSpec grid;
    Round horizon = 0;
    std::vector<TypeKey> types;
    ArrivalEstimate arrivals;
    OtdFit normal_fit;
    OtdFit power_law_fit;
    std::vector<std::string> cars;     // selected licenses
    std::vector<CellIndex> docking;    // per car: majority pickup cell
    std::uint64_t malformed = 0;
    std::uint64_t out_of_box = 0;
};

struct TrainOptions {
    Round rounds_per_day = 288;
    std::uint32_t cars = 30;       // selected uniformly at random when more exist
    std::uint64_t car_seed = 2013;
};

TrainedModel train(const ParsedTrips& trips, const GridSpec& grid,
                   const TrainOptions& options);

enum class ArrivalMode { kad, kiid };
enum class DistanceMetric { euclidean, manhattan };

struct InstanceOptions {
    ArrivalMode arrival_mode = ArrivalMode::kad;
    OtdFamily otd_family = OtdFamily::normal;
    // Use a power law whose mean matches the normal fit instead of the MLE
    // exponent (for occupation-robustness comparisons).
    bool match_power_law_mean = false;
    double weight_alpha = 0.5;
    DistanceMetric metric = DistanceMetric::euclidean;
};

// Cars x types with w = max(L1 - alpha * L2, 0), where L1 is the trip
// distance of the type and L2 the docking-to-pickup distance, both between
// cell centers in cell units; zero-weight edges are pruned.
model::Instance build_experiment_instance(const TrainedModel& model,
                                          const InstanceOptions& options);

// Deterministic synthetic trip generator: a fixed support of popular cell
// pairs, a smooth peak/off-peak intensity profile, per-car home cells (cars
// near a pickup serve it more often), and trip lengths from a chosen
// occupation family. At most one trip per (day, round).
struct SyntheticScenario {
    GridSpec grid{40.5, -74.2, 0.15, 6, 6};
    std::uint32_t cars = 30;
    std::uint32_t days = 12;
    Round rounds_per_day = 288;
    std::uint32_t type_pairs = 300;
    double popularity_skew = 0.7;  // pair weights proportional to rank^-skew
    double base_rate = 0.08;       // off-peak arrival probability per round
    struct Peak {
        double center = 100.0;   // round index
        double width = 25.0;     // gaussian width in rounds
        double added_rate = 0.6; // extra arrival probability at the center
    };
    std::vector<Peak> peaks{{100.0, 25.0, 0.6}, {220.0, 20.0, 0.5}};
    OtdFamily otd_family = OtdFamily::normal;
    double otd_mean = 2.6;
    double otd_sigma = 1.1;
    double otd_exponent = 0.0;  // used when otd_family == power_law (0 = derive
                                // from otd_mean at matched mean)
    std::uint64_t seed = 1;
};

std::vector<TripRecord> synth_trips(const SyntheticScenario& scenario);

// Compact 8-column CSV of the records (the format parse_trips reads back).
void write_trips_csv(std::ostream& os, std::span<const TripRecord> records);

}  // namespace omrr::data
