#include "banditms/types.hpp"

#include <cmath>

namespace banditms {

RegretTable RegretTable::accumulate(const std::vector<RegretRecord>& records) {
  RegretTable table;
  // (algorithm, instance) -> running sum and last round seen
  std::map<std::pair<std::string, int>, std::pair<double, int>> running;
  for (const auto& r : records) {
    auto key = std::make_pair(r.algorithm, r.instance_id);
    auto [it, inserted] = running.try_emplace(key, 0.0, 0);
    auto& [sum, last_round] = it->second;
    if (!inserted && r.round <= last_round) {
      auto& rounds = table.cells_[r.algorithm];
      auto round_it = rounds.find(r.round);
      if (round_it != rounds.end() && round_it->second.count(r.instance_id))
        throw std::invalid_argument("accumulate: duplicate (instance, algorithm, round) record");
      throw std::invalid_argument("accumulate: records not sorted by round within stream");
    }
    sum += r.instantaneous_regret;
    last_round = r.round;
    auto& per_instance = table.cells_[r.algorithm][r.round];
    if (!per_instance.emplace(r.instance_id, sum).second)
      throw std::invalid_argument("accumulate: duplicate (instance, algorithm, round) record");
  }
  return table;
}

std::vector<std::string> RegretTable::algorithms() const {
  std::vector<std::string> names;
  names.reserve(cells_.size());
  for (const auto& [name, _] : cells_) names.push_back(name);
  return names;
}

int RegretTable::max_round(const std::string& algorithm) const {
  auto it = cells_.find(algorithm);
  if (it == cells_.end() || it->second.empty())
    throw std::out_of_range("RegretTable: unknown algorithm " + algorithm);
  return it->second.rbegin()->first;
}

RegretTable::Stat RegretTable::at(const std::string& algorithm, int round) const {
  const auto values = cumulative_at(algorithm, round);
  Stat s;
  s.n = static_cast<int>(values.size());
  for (double v : values) s.mean += v;
  s.mean /= s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

std::vector<double> RegretTable::cumulative_at(const std::string& algorithm, int round) const {
  auto it = cells_.find(algorithm);
  if (it == cells_.end()) throw std::out_of_range("RegretTable: unknown algorithm " + algorithm);
  auto round_it = it->second.find(round);
  if (round_it == it->second.end())
    throw std::out_of_range("RegretTable: no records at round " + std::to_string(round));
  std::vector<double> values;
  values.reserve(round_it->second.size());
  for (const auto& [_, cum] : round_it->second) values.push_back(cum);
  return values;
}

}  // namespace banditms
