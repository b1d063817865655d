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

#ifndef PLUMBER_BUILTIN_H_
#define PLUMBER_BUILTIN_H_

#include <memory>
#include <string_view>
#include <vector>

#include "plumber/kg_snapshot.h"
#include "plumber/native_components.h"
#include "plumber/text.h"
#include "plumber/wire.h"

namespace plumber {

// Builtin keys accepted as native component targets.
namespace builtin {
inline constexpr std::string_view kRuleCoref = "rule_coref";
inline constexpr std::string_view kIdentityCoref = "identity_coref";
inline constexpr std::string_view kRuleExtractor = "rule_extractor";
inline constexpr std::string_view kEntityLinker = "snapshot_entity_linker";
inline constexpr std::string_view kRelationLinker = "snapshot_relation_linker";
inline constexpr std::string_view kJointLinker = "snapshot_joint_linker";
}  // namespace builtin

std::vector<std::string_view> builtin_keys();

// In-process host for the native baselines. Native components receive the
// same InvocationPayload as remote ones and answer with the same result
// bodies.
class NativeHost {
 public:
  NativeHost(Lexicon lexicon, std::shared_ptr<const SnapshotStore> snapshots,
             LinkerOptions linker_options = {});

  // Throws kUnknownComponent for an unknown key, kTaskMismatch when the key
  // does not implement payload.task, kSnapshotMissing for linking against an
  // unloaded KG.
  InvocationResult invoke(std::string_view builtin_key,
                          const InvocationPayload& payload) const;

  const Lexicon& lexicon() const { return lexicon_; }
  const SnapshotStore& snapshots() const { return *snapshots_; }

 private:
  Lexicon lexicon_;
  std::shared_ptr<const SnapshotStore> snapshots_;
  LinkerOptions linker_options_;
};

}  // namespace plumber

#endif  // PLUMBER_BUILTIN_H_
