#include "noncollide/json_io.hpp"

#include "noncollide/error.hpp"

namespace noncollide {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::InvalidArgument, "json", what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T>
std::vector<T> int_array(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array of integers");
  std::vector<T> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) fail(std::string(what) + " must be an array of integers");
    out.push_back(v.get<T>());
  }
  return out;
}

template <typename T>
std::vector<std::vector<T>> int_matrix(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array of arrays");
  std::vector<std::vector<T>> out;
  for (const auto& row : j) out.push_back(int_array<T>(row, what));
  return out;
}

std::vector<std::string> string_array(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) fail(std::string(what) + " must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

Json to_json(const Partition& p) { return Json(p.parts()); }

Json to_json(const SSYT& t) {
  Json j;
  j["shape"] = to_json(t.shape());
  j["max_entry"] = t.max_entry();
  j["rows"] = t.rows();
  return j;
}

Json to_json(const WalkRecord& w) {
  Json j;
  j["start"] = w.start();
  j["horizon"] = w.horizon();
  j["steps"] = w.steps();
  return j;
}

Json to_json(const PathGraph& g) {
  Json j;
  j["vertices"] = g.vertices();
  j["order"] = g.order();
  Json edges = Json::array();
  for (const auto& e : g.edges()) {
    Json ej;
    ej["from"] = e.from;
    ej["to"] = e.to;
    if (e.weight.get_den() == 1 && e.weight.get_num().fits_slong_p())
      ej["weight"] = e.weight.get_num().get_si();
    else
      ej["weight"] = to_string(e.weight);
    edges.push_back(std::move(ej));
  }
  j["edges"] = std::move(edges);
  return j;
}

Partition partition_from_json(const Json& j) { return Partition(int_array<int>(j, "partition")); }

SSYT ssyt_from_json(const Json& j) {
  const Json& max_entry = field(j, "max_entry");
  if (!max_entry.is_number_integer()) fail("max_entry must be an integer");
  return SSYT(partition_from_json(field(j, "shape")), int_matrix<int>(field(j, "rows"), "rows"), max_entry.get<int>());
}

WalkRecord walk_from_json(const Json& j) {
  const Json& horizon = field(j, "horizon");
  if (!horizon.is_number_integer()) fail("horizon must be an integer");
  return WalkRecord(int_array<long>(field(j, "start"), "start"), int_matrix<int>(field(j, "steps"), "steps"), horizon.get<int>());
}

PathGraph graph_from_json(const Json& j) {
  std::vector<std::string> vertices = string_array(field(j, "vertices"), "vertices");
  std::vector<std::string> order;
  if (j.contains("order")) order = string_array(j.at("order"), "order");
  std::vector<EdgeSpec> edges;
  const Json& ej = field(j, "edges");
  if (!ej.is_array()) fail("edges must be an array");
  for (const auto& e : ej) {
    EdgeSpec spec;
    const Json& from = field(e, "from");
    const Json& to = field(e, "to");
    if (!from.is_string() || !to.is_string()) fail("edge endpoints must be vertex ids");
    spec.from = from.get<std::string>();
    spec.to = to.get<std::string>();
    if (e.contains("weight")) {
      const Json& w = e.at("weight");
      if (w.is_number_integer())
        spec.weight = Rational(w.get<long>());
      else if (w.is_string())
        spec.weight = parse_rational(w.get<std::string>());
      else
        fail("edge weight must be an integer or a rational string");
    }
    edges.push_back(std::move(spec));
  }
  return PathGraph(std::move(vertices), std::move(order), std::move(edges));
}

}  // namespace noncollide
