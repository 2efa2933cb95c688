#include "wsaw/walk.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace wsaw {

void ModelParams::validate() const {
  if (d < 1 || d > kMaxDim) throw Error("d must lie in [1, " + std::to_string(kMaxDim) + "]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("lambda must lie in [0, 1]");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error("beta must be a finite number >= 0");
}

Walk::Walk(const Point& start) {
  sites_.push_back(start);
  occ_[start] = 1;
}

Walk::Walk(const std::vector<Point>& sites) {
  if (sites.empty()) throw Error("a walk needs at least one site");
  sites_.push_back(sites.front());
  occ_[sites.front()] = 1;
  for (std::size_t i = 1; i < sites.size(); ++i) push(sites[i]);
}

int Walk::occupancy(const Point& p) const {
  auto it = occ_.find(p);
  return it == occ_.end() ? 0 : it->second;
}

void Walk::push(const Point& next) {
  if (!adjacent(back(), next)) {
    throw Error("walk step " + back().to_string() + " -> " + next.to_string() +
                " is not a nearest-neighbour step");
  }
  int& m = occ_[next];
  pairs_ += m;
  ++m;
  sites_.push_back(next);
}

void Walk::pop() {
  if (sites_.size() <= 1) throw Error("cannot pop the starting site of a walk");
  auto it = occ_.find(sites_.back());
  --it->second;
  pairs_ -= it->second;
  if (it->second == 0) occ_.erase(it);
  sites_.pop_back();
}

Walk Walk::reversed() const {
  return Walk(std::vector<Point>(sites_.rbegin(), sites_.rend()));
}

Walk Walk::concatenated(const Walk& tail) const {
  Walk out = *this;
  for (const auto& p : tail.sites()) out.push(p);
  return out;
}

double extend_factor(const Walk& w, const Point& next, double lambda) {
  if (!adjacent(w.back(), next)) throw Error("extend_factor: non-adjacent extension");
  return one_minus_lambda_pow(lambda, w.occupancy(next));
}

std::int64_t cross_coincidences(const Walk& w1, const Walk& w2) {
  std::int64_t total = 0;
  for (const auto& p : w2.sites()) total += w1.occupancy(p);
  return total;
}

std::string walk_to_json(const Walk& w) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& p : w.sites()) j.push_back(p.coords());
  return j.dump();
}

Walk walk_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("walk JSON: ") + e.what());
  }
  if (!j.is_array() || j.empty()) throw Error("walk JSON must be a non-empty array of points");
  std::vector<Point> sites;
  for (const auto& p : j) sites.emplace_back(p.get<std::vector<int>>());
  return Walk(sites);
}

}  // namespace wsaw
