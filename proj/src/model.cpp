#include "hts/model.hpp"

#include <algorithm>
#include <cctype>

namespace hts {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

template <typename T>
void sort_by_id(std::vector<T>& items) {
  std::sort(items.begin(), items.end(), [](const T& a, const T& b) { return id_less(a.id, b.id); });
}

void sort_refs(std::vector<IdRef>& refs) {
  std::sort(refs.begin(), refs.end(), [](const IdRef& a, const IdRef& b) { return id_less(a.id, b.id); });
}

void require_distinct(const std::vector<IdRef>& refs, std::string_view what, std::string_view owner) {
  IdSet seen;
  for (const auto& ref : refs) {
    if (!seen.insert(ref.id).second) {
      throw ModelError("duplicate id '" + ref.id + "' in " + std::string(what) + " of '" + std::string(owner) + "'");
    }
  }
}

}  // namespace

bool id_less(std::string_view lhs, std::string_view rhs) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < lhs.size() && j < rhs.size()) {
    if (is_digit(lhs[i]) && is_digit(rhs[j])) {
      std::size_t i_end = i;
      std::size_t j_end = j;
      while (i_end < lhs.size() && is_digit(lhs[i_end])) ++i_end;
      while (j_end < rhs.size() && is_digit(rhs[j_end])) ++j_end;
      std::string_view a = lhs.substr(i, i_end - i);
      std::string_view b = rhs.substr(j, j_end - j);
      std::string_view a_trim = a.substr(std::min(a.find_first_not_of('0'), a.size()));
      std::string_view b_trim = b.substr(std::min(b.find_first_not_of('0'), b.size()));
      if (a_trim.size() != b_trim.size()) return a_trim.size() < b_trim.size();
      if (a_trim != b_trim) return a_trim < b_trim;
      i = i_end;
      j = j_end;
      continue;
    }
    if (lhs[i] != rhs[j]) return static_cast<unsigned char>(lhs[i]) < static_cast<unsigned char>(rhs[j]);
    ++i;
    ++j;
  }
  if ((lhs.size() - i) != (rhs.size() - j)) return (lhs.size() - i) < (rhs.size() - j);
  // Equal under natural order (e.g. E01 vs E1): fall back to bytes.
  return lhs < rhs;
}

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::Risk: return "Risk";
    case Tier::Micro: return "Micro";
    case Tier::Meso: return "Meso";
    case Tier::Macro: return "Macro";
  }
  return "?";
}

std::string_view to_string(SystemRole role) { return role == SystemRole::Hazard ? "Hazard" : "Target"; }

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Subsystem: return "Subsystem";
    case ConstraintKind::Interaction: return "Interaction";
    case ConstraintKind::Control: return "Control";
  }
  return "?";
}

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::Safe: return "Safe";
    case Severity::NearMiss: return "NearMiss";
    case Severity::Incident: return "Incident";
    case Severity::Accident: return "Accident";
    case Severity::MajorAccident: return "MajorAccident";
  }
  return "?";
}

std::string_view to_string(Gate gate) { return gate == Gate::All ? "All" : "Any"; }

std::string_view to_string(Domain domain) { return domain == Domain::Social ? "Social" : "Technical"; }

std::string_view to_string(RecommendationCategory category) {
  switch (category) {
    case RecommendationCategory::Legislative: return "Legislative";
    case RecommendationCategory::Government: return "Government";
    case RecommendationCategory::Corporate: return "Corporate";
    case RecommendationCategory::Intermediary: return "Intermediary";
    case RecommendationCategory::SocialMedia: return "SocialMedia";
    case RecommendationCategory::Technical: return "Technical";
  }
  return "?";
}

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::Entity: return "Entity";
    case ElementKind::Interaction: return "Interaction";
    case ElementKind::Constraint: return "SafetyConstraint";
    case ElementKind::Event: return "AdverseEvent";
    case ElementKind::Risk: return "Risk";
    case ElementKind::Controller: return "Controller";
    case ElementKind::Loop: return "ControlLoop";
  }
  return "?";
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownId: return "UNKNOWN_ID";
    case ErrorCode::NotANode: return "NOT_A_NODE";
    case ErrorCode::NotValidated: return "NOT_VALIDATED";
    case ErrorCode::PathLimit: return "PATH_LIMIT";
    case ErrorCode::NotMacro: return "NOT_MACRO";
    case ErrorCode::NotAConstraint: return "NOT_A_CONSTRAINT";
    case ErrorCode::InvalidOptions: return "INVALID_OPTIONS";
  }
  return "?";
}

AnalysisError::AnalysisError(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

ElementKind kind_of(const ElementRef& ref) { return static_cast<ElementKind>(ref.index()); }

Model::Model(ModelData data) : data_(std::move(data)) {
  sort_by_id(data_.entities);
  sort_by_id(data_.interactions);
  sort_by_id(data_.constraints);
  sort_by_id(data_.events);
  sort_by_id(data_.risks);
  sort_by_id(data_.controllers);
  sort_by_id(data_.loops);
  std::sort(data_.causes.begin(), data_.causes.end(),
            [](const CauseDecl& a, const CauseDecl& b) { return id_less(a.target.id, b.target.id); });
  std::stable_sort(data_.recommendations.begin(), data_.recommendations.end(),
                   [](const Recommendation& a, const Recommendation& b) { return a.category < b.category; });

  for (const auto& interaction : data_.interactions) {
    require_distinct(interaction.participants, "participants", interaction.id);
  }
  for (auto& cause : data_.causes) {
    sort_refs(cause.sources);
    require_distinct(cause.sources, "sources", cause.target.id);
  }
  for (auto& loop : data_.loops) {
    sort_refs(loop.enforces);
    require_distinct(loop.enforces, "enforces", loop.id);
  }

  auto add = [this](const std::string& id, ElementKind kind, std::size_t pos) {
    if (!index_.emplace(id, Slot{kind, pos}).second) throw ModelError("duplicate id '" + id + "'");
  };
  for (std::size_t i = 0; i < data_.entities.size(); ++i) add(data_.entities[i].id, ElementKind::Entity, i);
  for (std::size_t i = 0; i < data_.interactions.size(); ++i) add(data_.interactions[i].id, ElementKind::Interaction, i);
  for (std::size_t i = 0; i < data_.constraints.size(); ++i) add(data_.constraints[i].id, ElementKind::Constraint, i);
  for (std::size_t i = 0; i < data_.events.size(); ++i) add(data_.events[i].id, ElementKind::Event, i);
  for (std::size_t i = 0; i < data_.risks.size(); ++i) add(data_.risks[i].id, ElementKind::Risk, i);
  for (std::size_t i = 0; i < data_.controllers.size(); ++i) add(data_.controllers[i].id, ElementKind::Controller, i);
  for (std::size_t i = 0; i < data_.loops.size(); ++i) add(data_.loops[i].id, ElementKind::Loop, i);

  for (std::size_t i = 0; i < data_.causes.size(); ++i) {
    if (!cause_index_.emplace(data_.causes[i].target.id, i).second) {
      throw ModelError("second cause declaration for '" + data_.causes[i].target.id + "'");
    }
  }
}

std::optional<Model::Slot> Model::slot(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ElementRef> Model::resolve(std::string_view id) const {
  auto found = slot(id);
  if (!found) return std::nullopt;
  switch (found->kind) {
    case ElementKind::Entity: return ElementRef{&data_.entities[found->position]};
    case ElementKind::Interaction: return ElementRef{&data_.interactions[found->position]};
    case ElementKind::Constraint: return ElementRef{&data_.constraints[found->position]};
    case ElementKind::Event: return ElementRef{&data_.events[found->position]};
    case ElementKind::Risk: return ElementRef{&data_.risks[found->position]};
    case ElementKind::Controller: return ElementRef{&data_.controllers[found->position]};
    case ElementKind::Loop: return ElementRef{&data_.loops[found->position]};
  }
  return std::nullopt;
}

#define HTS_TYPED_LOOKUP(Fn, Type, Kind, Member)                     \
  const Type* Model::Fn(std::string_view id) const {                \
    auto found = slot(id);                                          \
    if (!found || found->kind != ElementKind::Kind) return nullptr; \
    return &data_.Member[found->position];                          \
  }

HTS_TYPED_LOOKUP(entity, Entity, Entity, entities)
HTS_TYPED_LOOKUP(interaction, Interaction, Interaction, interactions)
HTS_TYPED_LOOKUP(constraint, SafetyConstraint, Constraint, constraints)
HTS_TYPED_LOOKUP(event, AdverseEvent, Event, events)
HTS_TYPED_LOOKUP(risk, Risk, Risk, risks)
HTS_TYPED_LOOKUP(controller, Controller, Controller, controllers)
HTS_TYPED_LOOKUP(loop, ControlLoop, Loop, loops)

#undef HTS_TYPED_LOOKUP

const CauseDecl* Model::cause_of(std::string_view target) const {
  auto it = cause_index_.find(target);
  return it == cause_index_.end() ? nullptr : &data_.causes[it->second];
}

bool operator==(const Model& a, const Model& b) { return a.data_ == b.data_; }

std::optional<ElementKind> kind_of(const Model& model, std::string_view id) {
  auto ref = model.resolve(id);
  if (!ref) return std::nullopt;
  return kind_of(*ref);
}

Tier node_tier(const Model& model, std::string_view id) {
  auto ref = model.resolve(id);
  if (!ref) throw AnalysisError(ErrorCode::UnknownId, "no element named '" + std::string(id) + "'");
  if (std::holds_alternative<const Risk*>(*ref)) return Tier::Risk;
  if (const auto* const* event = std::get_if<const AdverseEvent*>(&*ref)) {
    const SafetyConstraint* violated = model.constraint((*event)->violates.id);
    if (violated == nullptr) {
      throw AnalysisError(ErrorCode::UnknownId, "event '" + std::string(id) + "' violates unknown constraint '" +
                                                    (*event)->violates.id + "'");
    }
    return violated->tier;
  }
  throw AnalysisError(ErrorCode::NotANode,
                      "'" + std::string(id) + "' is a " + std::string(to_string(kind_of(*ref))) + ", not an event or risk");
}

std::vector<std::string> ancestors(const Model& model, std::string_view id) {
  std::vector<std::string> chain;
  IdSet seen{std::string(id)};
  const Entity* current = model.entity(id);
  while (current != nullptr && current->parent) {
    const std::string& parent = current->parent->id;
    if (!seen.insert(parent).second) break;
    chain.push_back(parent);
    current = model.entity(parent);
  }
  return chain;
}

bool is_within(const Model& model, std::string_view id, std::string_view ancestor) {
  if (id == ancestor) return true;
  const auto chain = ancestors(model, id);
  return std::find(chain.begin(), chain.end(), ancestor) != chain.end();
}

bool is_external(const Model& model, std::string_view entity_id) {
  const Entity* entity = model.entity(entity_id);
  if (entity == nullptr) return false;
  if (entity->external) return true;
  for (const auto& up : ancestors(model, entity_id)) {
    const Entity* parent = model.entity(up);
    if (parent != nullptr && parent->external) return true;
  }
  return false;
}

}  // namespace hts
