#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ecobatch/batch.hpp"
#include "json.hpp"

namespace ecobatch {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json params_to_json(const VehicleParams& p) {
  return json{{"v_min", p.v_min},
              {"v_max", p.v_max},
              {"a_max", p.a_max},
              {"d_max", p.d_max},
              {"d_emergency", p.d_emergency},
              {"v_entry", p.v_entry},
              {"v_depart", p.v_depart},
              {"vehicle_length", p.vehicle_length},
              {"min_gap_hdv", p.min_gap_hdv},
              {"min_gap_cav", p.min_gap_cav},
              {"approach_length", p.approach_length}};
}

VehicleParams params_from_json(const json& j) {
  VehicleParams p;
  p.v_min = j.at("v_min").get<double>();
  p.v_max = j.at("v_max").get<double>();
  p.a_max = j.at("a_max").get<double>();
  p.d_max = j.at("d_max").get<double>();
  p.d_emergency = j.at("d_emergency").get<double>();
  p.v_entry = j.at("v_entry").get<double>();
  p.v_depart = j.at("v_depart").get<double>();
  p.vehicle_length = j.at("vehicle_length").get<double>();
  p.min_gap_hdv = j.at("min_gap_hdv").get<double>();
  p.min_gap_cav = j.at("min_gap_cav").get<double>();
  p.approach_length = j.at("approach_length").get<double>();
  return p;
}

json entries_to_json(const EcoBatch& batch) {
  json arr = json::array();
  for (const auto& e : batch.entries) {
    arr.push_back(json{{"travel_ticks", e.travel_ticks},
                       {"fuel", e.fuel},
                       {"positions", e.trajectory.positions()}});
  }
  return arr;
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1)
    throw std::runtime_error("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string canonical_entries_json(const EcoBatch& batch) {
  return entries_to_json(batch).dump();
}

void save_batch(const EcoBatch& batch, const std::filesystem::path& path) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["theta"] = batch.meta.theta;
  doc["dv"] = batch.meta.dv;
  doc["phi"] = batch.meta.phi;
  doc["max_travel_ticks"] = batch.meta.max_travel_ticks;
  doc["params"] = params_to_json(batch.meta.params);
  doc["signal"] = json{{"cycle", batch.meta.signal.cycle},
                       {"green", batch.meta.signal.green},
                       {"yellow", batch.meta.signal.yellow},
                       {"red", batch.meta.signal.red},
                       {"offset", batch.meta.signal.offset}};
  doc["coefficients"] = batch.meta.coeffs.k;
  doc["content_hash"] = batch.meta.content_hash.empty()
                            ? sha256_hex(canonical_entries_json(batch))
                            : batch.meta.content_hash;
  doc["entries"] = entries_to_json(batch);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw BatchIoError("cannot open for writing: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw BatchIoError("write failed: " + path.string());
}

EcoBatch load_batch(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BatchIoError("cannot open: " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw SchemaMismatchError(std::string("invalid batch file: ") + e.what());
  }

  EcoBatch batch;
  try {
    if (doc.at("format_version").get<int>() != kFormatVersion)
      throw SchemaMismatchError("unsupported batch format version");
    batch.meta.theta = doc.at("theta").get<double>();
    batch.meta.dv = doc.at("dv").get<double>();
    batch.meta.phi = doc.at("phi").get<int>();
    batch.meta.max_travel_ticks = doc.at("max_travel_ticks").get<long>();
    batch.meta.params = params_from_json(doc.at("params"));
    const json& sig = doc.at("signal");
    batch.meta.signal.cycle = sig.at("cycle").get<double>();
    batch.meta.signal.green = sig.at("green").get<double>();
    batch.meta.signal.yellow = sig.at("yellow").get<double>();
    batch.meta.signal.red = sig.at("red").get<double>();
    batch.meta.signal.offset = sig.at("offset").get<double>();
    batch.meta.coeffs.k =
        doc.at("coefficients").get<std::array<std::array<double, 4>, 4>>();
    batch.meta.content_hash = doc.at("content_hash").get<std::string>();

    TimeGrid grid;
    grid.theta = batch.meta.theta;
    grid.horizon_ticks = std::numeric_limits<long>::max() / 2;
    for (const json& je : doc.at("entries")) {
      auto positions = je.at("positions").get<std::vector<double>>();
      Trajectory traj(0, std::move(positions), batch.meta.params, grid,
                      batch.meta.params.d_max);
      batch.entries.push_back(BatchEntry{je.at("travel_ticks").get<long>(),
                                         je.at("fuel").get<double>(),
                                         std::move(traj)});
    }
  } catch (const json::exception& e) {
    throw SchemaMismatchError(std::string("invalid batch file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaMismatchError(std::string("invalid batch entry: ") + e.what());
  }

  const std::string recomputed = sha256_hex(canonical_entries_json(batch));
  if (recomputed != batch.meta.content_hash)
    throw HashMismatchError("batch content hash mismatch");

  batch.t_min = std::numeric_limits<long>::max();
  double prev_fuel = -std::numeric_limits<double>::infinity();
  for (const auto& e : batch.entries) {
    if (!e.trajectory.travel_ticks() ||
        *e.trajectory.travel_ticks() != e.travel_ticks)
      throw SchemaMismatchError("entry travel_ticks inconsistent with positions");
    const double derived = trajectory_fuel(e.trajectory, batch.meta.coeffs);
    const double scale = std::max(std::abs(e.fuel), 1e-300);
    if (std::abs(derived - e.fuel) / scale > 1e-12)
      throw SchemaMismatchError("entry fuel inconsistent with positions");
    if (e.fuel < prev_fuel)
      throw SchemaMismatchError("entries not sorted by fuel");
    prev_fuel = e.fuel;
    batch.t_min = std::min(batch.t_min, e.travel_ticks);
  }
  if (batch.entries.empty()) throw SchemaMismatchError("batch has no entries");
  return batch;
}

namespace {
void require_equal(double a, double b, const char* field) {
  if (a != b) {
    std::ostringstream os;
    os << "batch parameter mismatch: " << field << " (batch " << a
       << ", requested " << b << ")";
    throw ParamMismatchError(os.str());
  }
}
}  // namespace

void require_compatible(const EcoBatch& batch, const VehicleParams& params,
                        const GridSpec& spec, const SignalPlan& plan, int phi,
                        const TimeGrid& grid,
                        const VtMicroCoefficients& coeffs) {
  const VehicleParams& bp = batch.meta.params;
  require_equal(batch.meta.theta, grid.theta, "theta");
  require_equal(batch.meta.dv, spec.dv, "dv");
  require_equal(bp.v_min, params.v_min, "v_min");
  require_equal(bp.v_max, params.v_max, "v_max");
  require_equal(bp.a_max, params.a_max, "a_max");
  require_equal(bp.d_max, params.d_max, "d_max");
  require_equal(bp.d_emergency, params.d_emergency, "d_emergency");
  require_equal(bp.v_entry, params.v_entry, "v_entry");
  require_equal(bp.v_depart, params.v_depart, "v_depart");
  require_equal(bp.vehicle_length, params.vehicle_length, "vehicle_length");
  require_equal(bp.min_gap_hdv, params.min_gap_hdv, "min_gap_hdv");
  require_equal(bp.min_gap_cav, params.min_gap_cav, "min_gap_cav");
  require_equal(bp.approach_length, params.approach_length, "approach_length");
  require_equal(batch.meta.signal.cycle, plan.cycle, "signal.cycle");
  require_equal(batch.meta.signal.green, plan.green, "signal.green");
  require_equal(batch.meta.signal.yellow, plan.yellow, "signal.yellow");
  require_equal(batch.meta.signal.red, plan.red, "signal.red");
  require_equal(batch.meta.signal.offset, plan.offset, "signal.offset");
  if (batch.meta.phi != phi)
    throw ParamMismatchError("batch parameter mismatch: phi");
  if (!(batch.meta.coeffs == coeffs))
    throw ParamMismatchError("batch parameter mismatch: coefficients");
}

}  // namespace ecobatch
