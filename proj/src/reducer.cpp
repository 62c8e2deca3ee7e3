#include "taforge/reducer.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "taforge/errors.hpp"
#include "taforge/prompts.hpp"

using nlohmann::json;

namespace taforge::reducer {

namespace {

std::vector<int> parse_indices(const json& arr, const std::string& raw) {
  std::vector<int> out;
  for (const auto& v : arr) {
    if (v.is_number_integer())
      out.push_back(v.get<int>());
    else if (v.is_string())
      try {
        out.push_back(std::stoi(v.get<std::string>()));
      } catch (const std::exception&) {
        throw ValidationError("malformed_response: non-numeric index in: " + raw);
      }
    else
      throw ValidationError("malformed_response: non-numeric index in: " + raw);
  }
  return out;
}

}  // namespace

ReduceResult reduce(const codegen::Codebook& codebook, gateway::Gateway& gw,
                    const gateway::ModelConfig& model, const std::string& prompt_template) {
  if (codebook.stage != codegen::Stage::raw)
    throw ValidationError("reduce expects a raw codebook, got stage " +
                          std::string(codegen::stage_name(codebook.stage)));

  std::vector<std::string> lines;
  lines.reserve(codebook.codes.size());
  for (const auto& code : codebook.codes)
    lines.push_back(prompts::dedup_topic_line(code.name, code.index, code.description));

  gateway::ChatRequest req;
  req.config = model;
  req.purpose = gateway::Purpose::dedup;
  req.messages.push_back(
      {"user", prompts::render(prompt_template, {{"topics", prompts::join_topics(lines)}})});
  gateway::ChatResponse resp = gw.complete(req);

  json parsed = json::parse(codegen::extract_json_object(resp.content));
  if (!parsed.contains("items") || !parsed["items"].is_array())
    throw ValidationError("malformed_response: missing 'items' array in: " + resp.content);

  std::set<int> valid;
  for (const auto& code : codebook.codes) valid.insert(code.index);

  ReduceResult result;
  result.raw_response = resp.content;
  std::set<int> seen;
  for (const auto& item : parsed["items"]) {
    UniqueGroup group;
    group.topic_label = item.value("topic", "");
    if (!item.contains("indices") || !item["indices"].is_array())
      throw ValidationError("malformed_response: item missing 'indices' in: " + resp.content);
    std::vector<int> raw_indices = parse_indices(item["indices"], resp.content);

    // The index anchoring is the guard: anything outside the input set aborts.
    std::vector<int> bad;
    for (int idx : raw_indices)
      if (!valid.count(idx)) bad.push_back(idx);
    if (!bad.empty()) {
      std::string offenders;
      for (int idx : bad) offenders += " " + std::to_string(idx);
      throw HallucinationError("dedup response references unknown indices:" + offenders);
    }

    for (int idx : raw_indices) {
      if (seen.count(idx)) {
        result.warnings.push_back("index " + std::to_string(idx) +
                                  " appears in multiple groups; kept in its first group");
        continue;
      }
      seen.insert(idx);
      group.indices.push_back(idx);
    }
    if (!group.indices.empty()) result.groups.push_back(std::move(group));
  }

  for (int idx : valid) {
    if (!seen.count(idx)) {
      result.warnings.push_back("index " + std::to_string(idx) +
                                " not covered by any group; kept as singleton");
      UniqueGroup singleton;
      singleton.topic_label = codebook.codes[static_cast<std::size_t>(idx)].name;
      singleton.indices = {idx};
      result.groups.push_back(std::move(singleton));
    }
  }
  return result;
}

MergeResult merge(const codegen::Codebook& codebook, const std::vector<UniqueGroup>& groups,
                  const MergePolicy& policy) {
  std::set<int> covered;
  for (const auto& g : groups) {
    if (g.indices.empty()) throw ValidationError("internal error: empty unique group");
    for (int idx : g.indices) covered.insert(idx);
  }
  for (const auto& code : codebook.codes)
    if (!covered.count(code.index))
      throw ValidationError("groups do not cover index " + std::to_string(code.index));

  MergeResult result;
  result.codebook.provenance = codebook.provenance;
  result.codebook.stage = codegen::Stage::reduced;

  for (const auto& g : groups) {
    std::vector<int> members = g.indices;
    std::sort(members.begin(), members.end());
    const codegen::Code& rep = codebook.codes[static_cast<std::size_t>(members.front())];

    codegen::Code merged;
    merged.index = static_cast<int>(result.codebook.codes.size());
    merged.name = rep.name;
    merged.description = rep.description;
    merged.source_chunk = rep.source_chunk;
    merged.quote_verified = rep.quote_verified;
    merged.merged_from = members;
    for (int idx : members) {
      for (const auto& q : codebook.codes[static_cast<std::size_t>(idx)].quotes) {
        if (static_cast<int>(merged.quotes.size()) >= policy.max_quotes_per_code) break;
        merged.quotes.push_back(q);
      }
    }
    for (int idx : members) result.index_mapping.emplace_back(idx, merged.index);
    result.codebook.codes.push_back(std::move(merged));
  }
  std::sort(result.index_mapping.begin(), result.index_mapping.end());
  return result;
}

codegen::Codebook shorten_descriptions(const codegen::Codebook& codebook, int char_limit) {
  if (char_limit < 40) throw ValidationError("char_limit must be >= 40");
  codegen::Codebook out = codebook;
  out.stage = codegen::Stage::shortened;
  for (auto& code : out.codes) {
    if (static_cast<int>(code.description.size()) <= char_limit) continue;
    static constexpr std::string_view kEllipsis = "...";
    std::size_t cut = static_cast<std::size_t>(char_limit) - kEllipsis.size();
    std::size_t space = code.description.rfind(' ', cut);
    if (space != std::string::npos && space > 0) cut = space;
    code.description = code.description.substr(0, cut) + std::string(kEllipsis);
  }
  return out;
}

std::string groups_to_json(const ReduceResult& result) {
  json j;
  j["groups"] = json::array();
  for (const auto& g : result.groups)
    j["groups"].push_back({{"topic", g.topic_label}, {"indices", g.indices}});
  j["warnings"] = result.warnings;
  j["raw_response"] = result.raw_response;
  return j.dump(2) + "\n";
}

std::vector<UniqueGroup> groups_from_json(std::string_view data) {
  json j = json::parse(data);
  std::vector<UniqueGroup> groups;
  for (const auto& g : j.at("groups")) {
    UniqueGroup group;
    group.topic_label = g.value("topic", "");
    for (const auto& idx : g.at("indices")) group.indices.push_back(idx.get<int>());
    groups.push_back(std::move(group));
  }
  return groups;
}

}  // namespace taforge::reducer
