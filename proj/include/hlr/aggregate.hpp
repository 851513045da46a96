// include/hlr/aggregate.hpp

// Copyright 2026  The hlr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "hlr/corpus.hpp"

namespace hlr {

struct AggregationConfig {
  /// At most this many messages per user, sampled without replacement.
  /// Unset means every message is used.
  std::optional<std::size_t> message_cap;
  std::uint64_t seed = 0;
};

/// One row per user: the mean of that user's message rows. Messages are
/// summed in message-id order in double precision and rounded to float once,
/// so the result does not depend on input row order. Output ids are sorted.
///
/// When a user exceeds the cap, the subset is drawn from a generator seeded
/// with derive_seed(seed, user_id), which keeps each user's sample stable
/// under reordering or filtering of the corpus.
EmbeddingTable aggregate_users(const EmbeddingTable& messages, const AggregationConfig& cfg);

}  // namespace hlr
