#pragma once

/// @file
/// Typed intermediate representation of a hazard-target system analysis.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hts {

/// Byte range plus 1-based line/column of the first byte.
struct SourceSpan {
  std::size_t byte_start = 0;
  std::size_t byte_end = 0;
  std::uint32_t line = 1;
  std::uint32_t column = 1;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Where a model element was declared. Locations never take part in
/// structural equality of model elements.
struct Location {
  SourceSpan span;

  friend bool operator==(const Location&, const Location&) { return true; }
};

/// A reference to another element by id, remembering where it was written.
struct IdRef {
  std::string id;
  Location at;

  IdRef() = default;
  IdRef(std::string value, SourceSpan span = {}) : id(std::move(value)), at{span} {}
  IdRef(const char* value) : id(value) {}

  friend bool operator==(const IdRef&, const IdRef&) = default;
};

/// Natural ordering of identifiers: digit runs compare numerically, so
/// E1.2 < E1.10 and SC2.9 < SC2.31.
bool id_less(std::string_view lhs, std::string_view rhs);

struct IdLess {
  using is_transparent = void;
  bool operator()(std::string_view lhs, std::string_view rhs) const { return id_less(lhs, rhs); }
};

using IdSet = std::set<std::string, IdLess>;

enum class Tier : int { Risk = 0, Micro = 1, Meso = 2, Macro = 3 };
enum class SystemRole { Hazard, Target };
enum class ConstraintKind { Subsystem, Interaction, Control };
enum class Severity : int { Safe = 0, NearMiss = 1, Incident = 2, Accident = 3, MajorAccident = 4 };
enum class Gate { All, Any };
enum class Domain { Social, Technical };
enum class RecommendationCategory { Legislative, Government, Corporate, Intermediary, SocialMedia, Technical };

inline bool operator<(Tier a, Tier b) { return static_cast<int>(a) < static_cast<int>(b); }
inline bool operator<(Severity a, Severity b) { return static_cast<int>(a) < static_cast<int>(b); }

// Display names ("Micro", "NearMiss", "SocialMedia", ...).
std::string_view to_string(Tier tier);
std::string_view to_string(SystemRole role);
std::string_view to_string(ConstraintKind kind);
std::string_view to_string(Severity severity);
std::string_view to_string(Gate gate);
std::string_view to_string(Domain domain);
std::string_view to_string(RecommendationCategory category);

struct Entity {
  std::string id;
  SystemRole role = SystemRole::Hazard;
  std::string label;
  std::optional<IdRef> parent;
  /// Marks a target lying outside the boundary of the analysed work system
  /// (surrounding residents, neighbouring enterprises). Inherited by children.
  bool external = false;
  Location at;

  friend bool operator==(const Entity&, const Entity&) = default;
};

struct Interaction {
  std::string id;
  std::vector<IdRef> participants;  // declaration order is significant
  std::string label;
  Location at;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

struct SafetyConstraint {
  std::string id;
  ConstraintKind kind = ConstraintKind::Subsystem;
  Tier tier = Tier::Micro;
  IdRef subject;
  std::string text;
  Location at;

  friend bool operator==(const SafetyConstraint&, const SafetyConstraint&) = default;
};

struct AdverseEvent {
  std::string id;
  IdRef violates;
  std::string text;
  Location at;

  friend bool operator==(const AdverseEvent&, const AdverseEvent&) = default;
};

struct Risk {
  std::string id;
  Severity severity = Severity::NearMiss;
  IdRef subject;
  std::string text;
  Location at;

  friend bool operator==(const Risk&, const Risk&) = default;
};

struct CauseDecl {
  IdRef target;
  Gate gate = Gate::Any;
  std::vector<IdRef> sources;  // kept sorted by id
  Location at;

  friend bool operator==(const CauseDecl&, const CauseDecl&) = default;
};

struct Controller {
  std::string id;
  Tier tier = Tier::Micro;
  Domain domain = Domain::Social;
  std::string label;
  Location at;

  friend bool operator==(const Controller&, const Controller&) = default;
};

struct ControlLoop {
  std::string id;
  IdRef controller;
  IdRef controls;
  std::optional<std::string> actuator;
  std::optional<std::string> sensor;
  std::vector<IdRef> enforces;  // kept sorted by id
  Location at;

  friend bool operator==(const ControlLoop&, const ControlLoop&) = default;
};

struct Recommendation {
  IdRef for_controller;
  RecommendationCategory category = RecommendationCategory::Corporate;
  std::string text;
  Location at;

  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

/// Raw collections handed to the Model constructor. Order is irrelevant.
struct ModelData {
  std::string name;
  std::vector<Entity> entities;
  std::vector<Interaction> interactions;
  std::vector<SafetyConstraint> constraints;
  std::vector<AdverseEvent> events;
  std::vector<Risk> risks;
  std::vector<CauseDecl> causes;
  std::vector<Controller> controllers;
  std::vector<ControlLoop> loops;
  std::vector<Recommendation> recommendations;

  friend bool operator==(const ModelData&, const ModelData&) = default;
};

enum class ElementKind { Entity, Interaction, Constraint, Event, Risk, Controller, Loop };

std::string_view to_string(ElementKind kind);

/// A non-owning view of the element bearing some id.
using ElementRef = std::variant<const Entity*, const Interaction*, const SafetyConstraint*, const AdverseEvent*,
                                const Risk*, const Controller*, const ControlLoop*>;

ElementKind kind_of(const ElementRef& ref);

/// Thrown when a model is built from data that breaks a structural invariant
/// (duplicate ids, duplicate list members, a second CauseDecl for a target).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Stable error codes raised by model queries and analyses.
enum class ErrorCode { UnknownId, NotANode, NotValidated, PathLimit, NotMacro, NotAConstraint, InvalidOptions };

std::string_view to_string(ErrorCode code);

class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Immutable analysis model. Every collection is held in canonical order:
/// sorted by id, recommendations grouped by category in declaration order,
/// cause sources and loop enforcement lists sorted by id.
class Model {
 public:
  Model() : Model(ModelData{}) {}
  explicit Model(ModelData data);

  const std::string& name() const noexcept { return data_.name; }
  const std::vector<Entity>& entities() const noexcept { return data_.entities; }
  const std::vector<Interaction>& interactions() const noexcept { return data_.interactions; }
  const std::vector<SafetyConstraint>& constraints() const noexcept { return data_.constraints; }
  const std::vector<AdverseEvent>& events() const noexcept { return data_.events; }
  const std::vector<Risk>& risks() const noexcept { return data_.risks; }
  const std::vector<CauseDecl>& causes() const noexcept { return data_.causes; }
  const std::vector<Controller>& controllers() const noexcept { return data_.controllers; }
  const std::vector<ControlLoop>& loops() const noexcept { return data_.loops; }
  const std::vector<Recommendation>& recommendations() const noexcept { return data_.recommendations; }

  const ModelData& data() const noexcept { return data_; }

  std::optional<ElementRef> resolve(std::string_view id) const;

  // Typed lookups; nullptr when the id is absent or names another category.
  const Entity* entity(std::string_view id) const;
  const Interaction* interaction(std::string_view id) const;
  const SafetyConstraint* constraint(std::string_view id) const;
  const AdverseEvent* event(std::string_view id) const;
  const Risk* risk(std::string_view id) const;
  const Controller* controller(std::string_view id) const;
  const ControlLoop* loop(std::string_view id) const;
  const CauseDecl* cause_of(std::string_view target) const;

  friend bool operator==(const Model& a, const Model& b);

 private:
  struct Slot {
    ElementKind kind;
    std::size_t position;
  };

  std::optional<Slot> slot(std::string_view id) const;

  ModelData data_;
  // Positions rather than pointers so copies of a Model stay self-consistent.
  std::map<std::string, Slot, std::less<>> index_;
  std::map<std::string, std::size_t, std::less<>> cause_index_;
};

/// Result of resolve() for callers that want the category name too.
std::optional<ElementKind> kind_of(const Model& model, std::string_view id);

/// Tier of an event (its violated constraint's tier) or risk (Tier::Risk).
/// Throws AnalysisError UnknownId / NotANode.
Tier node_tier(const Model& model, std::string_view id);

/// Entity ids on the part_of chain above `id`, nearest first. Stops at a
/// repeated id so malformed chains terminate.
std::vector<std::string> ancestors(const Model& model, std::string_view id);

/// True when `id` is `ancestor` or lies below it on the part_of chain.
bool is_within(const Model& model, std::string_view id, std::string_view ancestor);

/// True when the target (or one of its ancestors) is marked external.
bool is_external(const Model& model, std::string_view entity_id);

}  // namespace hts
