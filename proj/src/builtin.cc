// Copyright 2026 The Plumber Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "plumber/builtin.h"

#include "plumber/error.h"

namespace plumber {

namespace {

TaskKind TaskOf(std::string_view key) {
  if (key == builtin::kRuleCoref || key == builtin::kIdentityCoref) {
    return TaskKind::kCoref;
  }
  if (key == builtin::kRuleExtractor) return TaskKind::kTripleExtraction;
  if (key == builtin::kEntityLinker) return TaskKind::kEntityLinking;
  if (key == builtin::kRelationLinker) return TaskKind::kRelationLinking;
  if (key == builtin::kJointLinker) return TaskKind::kJointLinking;
  throw Error(ErrorCode::kUnknownComponent,
              "unknown builtin component '" + std::string(key) + "'",
              std::string(key));
}

LinkedTerm Unlinked(const Mention& m) { return LinkedTerm{m, std::nullopt, 0.0}; }

}  // namespace

std::vector<std::string_view> builtin_keys() {
  return {builtin::kRuleCoref,    builtin::kIdentityCoref,
          builtin::kRuleExtractor, builtin::kEntityLinker,
          builtin::kRelationLinker, builtin::kJointLinker};
}

NativeHost::NativeHost(Lexicon lexicon,
                       std::shared_ptr<const SnapshotStore> snapshots,
                       LinkerOptions linker_options)
    : lexicon_(std::move(lexicon)),
      snapshots_(std::move(snapshots)),
      linker_options_(linker_options) {}

InvocationResult NativeHost::invoke(std::string_view key,
                                    const InvocationPayload& payload) const {
  const TaskKind task = TaskOf(key);
  if (task != payload.task) {
    throw Error(ErrorCode::kTaskMismatch,
                "builtin '" + std::string(key) + "' implements " +
                    std::string(task_name(task)) + ", payload asks for " +
                    std::string(task_name(payload.task)),
                std::string(key));
  }
  validate_payload(payload);

  switch (task) {
    case TaskKind::kCoref: {
      if (key == builtin::kIdentityCoref) {
        return InvocationResult::Ok(CorefResult{*payload.text, {}});
      }
      CorefOutput out = resolve_coreferences(*payload.text, lexicon_);
      return InvocationResult::Ok(
          CorefResult{std::move(out.text), std::move(out.substitutions)});
    }
    case TaskKind::kTripleExtraction:
      return InvocationResult::Ok(
          ExtractionResult{extract_triples(*payload.text, lexicon_)});
    case TaskKind::kEntityLinking:
    case TaskKind::kRelationLinking:
    case TaskKind::kJointLinking: {
      auto snapshot = snapshots_->get(*payload.kg);
      const auto& triples = *payload.triples;
      const bool entities = task != TaskKind::kRelationLinking;
      const bool predicates = task != TaskKind::kEntityLinking;

      std::vector<LinkedTerm> subjects, objects, preds;
      if (entities) {
        std::vector<Mention> s, o;
        for (const auto& t : triples) {
          s.push_back(t.subject);
          o.push_back(t.object);
        }
        subjects = link_terms(s, TermRole::kEntity, *snapshot, linker_options_);
        objects = link_terms(o, TermRole::kEntity, *snapshot, linker_options_);
      }
      if (predicates) {
        std::vector<Mention> p;
        for (const auto& t : triples) p.push_back(t.predicate);
        preds = link_terms(p, TermRole::kPredicate, *snapshot, linker_options_);
      }

      LinkingResult result;
      for (std::size_t i = 0; i < triples.size(); ++i) {
        const auto& t = triples[i];
        result.aligned.push_back(AlignedTriple{
            entities ? subjects[i] : Unlinked(t.subject),
            predicates ? preds[i] : Unlinked(t.predicate),
            entities ? objects[i] : Unlinked(t.object)});
      }
      return InvocationResult::Ok(std::move(result));
    }
  }
  throw Error(ErrorCode::kInternal, "unreachable task");
}

}  // namespace plumber
