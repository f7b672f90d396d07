#include "wproj/measure_io.hpp"

#include <fstream>

#include "wproj/discretize.hpp"
#include "wproj/error.hpp"

namespace wproj {

using nlohmann::json;

namespace {

json point_rows(const std::vector<double>& coords, int dim) {
  json rows = json::array();
  const auto d = static_cast<std::size_t>(dim);
  for (std::size_t i = 0; i < coords.size(); i += d) {
    rows.push_back(std::vector<double>(coords.begin() + static_cast<std::ptrdiff_t>(i),
                                       coords.begin() + static_cast<std::ptrdiff_t>(i + d)));
  }
  return rows;
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const AnyMeasure& m) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DiscreteMeasure>) {
          return {{"type", "discrete"}, {"dim", v.dim()}, {"points", point_rows(v.coords(), v.dim())},
                  {"weights", v.weights()}};
        } else if constexpr (std::is_same_v<T, GridMeasure>) {
          return {{"type", "grid"},           {"origin", v.grid().origin},     {"spacing", v.grid().spacing},
                  {"shape", v.grid().shape},  {"cell_mass", v.cell_mass()},    {"lambda", v.lambda()},
                  {"in_k", v.claims_membership()}};
        } else {
          return {{"type", "ball_union"}, {"centers", v.centers()}, {"radii", v.radii()}, {"lambda", v.lambda()}};
        }
      },
      m);
}

AnyMeasure measure_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "measure must be a JSON object");
  const auto type = field<std::string>(j, "type");
  if (type == "discrete") {
    const auto dim = field<int>(j, "dim");
    const auto points = field<std::vector<std::vector<double>>>(j, "points");
    for (const auto& p : points) {
      if (static_cast<int>(p.size()) != dim) throw Error(ErrorCode::DimMismatch, "point has wrong dim");
    }
    return DiscreteMeasure::create(points, field<std::vector<double>>(j, "weights"));
  }
  if (type == "grid") {
    GridSpec grid{field<std::vector<double>>(j, "origin"), field<std::vector<double>>(j, "spacing"),
                  field<std::vector<std::size_t>>(j, "shape")};
    const bool in_k = j.contains("in_k") ? field<bool>(j, "in_k") : true;
    return GridMeasure::create(std::move(grid), field<std::vector<double>>(j, "cell_mass"),
                               field<double>(j, "lambda"), in_k);
  }
  if (type == "ball_union") {
    return BallUnionMeasure::create(field<std::vector<Point>>(j, "centers"), field<std::vector<double>>(j, "radii"),
                                    field<double>(j, "lambda"));
  }
  throw Error(ErrorCode::ParseError, "unknown measure type '" + type + "'");
}

AnyMeasure read_measure(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return measure_from_json(j);
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << j.dump() << '\n';
}

void write_measure(const std::filesystem::path& path, const AnyMeasure& m) { write_json_file(path, to_json(m)); }

json plan_to_json(const TransportPlan& plan) {
  json entries = json::array();
  for (const auto& e : plan.entries) entries.push_back(json::array({e.source, e.target, e.mass}));
  return {{"entries", std::move(entries)}};
}

std::vector<TransportPlan::Entry> plan_entries_from_json(const json& j) {
  std::vector<TransportPlan::Entry> out;
  for (const auto& row : field<json>(j, "entries")) {
    if (!row.is_array() || row.size() != 3) throw Error(ErrorCode::ParseError, "plan entry must be [i, j, mass]");
    out.push_back({row[0].get<std::size_t>(), row[1].get<std::size_t>(), row[2].get<double>()});
  }
  return out;
}

DiscreteMeasure as_discrete(const AnyMeasure& m, std::size_t n, std::uint64_t seed) {
  if (const auto* d = std::get_if<DiscreteMeasure>(&m)) return *d;
  if (const auto* g = std::get_if<GridMeasure>(&m)) return g->to_discrete();
  return sample_ball_union(std::get<BallUnionMeasure>(m), n, seed);
}

int dim_of(const AnyMeasure& m) {
  return std::visit([](const auto& v) { return v.dim(); }, m);
}

}  // namespace wproj
