// Copyright 2026 The TextAlign Authors. All Rights Reserved.
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

#include "textalign/error.hpp"

namespace textalign {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::missing_column: return "MissingColumn";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::label_out_of_range: return "LabelOutOfRange";
    case Errc::malformed_row: return "MalformedRow";
    case Errc::too_few_records: return "TooFewRecords";
    case Errc::duplicate_modality_spec: return "DuplicateModalitySpec";
    case Errc::unknown_column: return "UnknownColumn";
    case Errc::caption_unavailable: return "CaptionUnavailable";
    case Errc::provider_error: return "ProviderError";
    case Errc::timeout: return "Timeout";
    case Errc::auth_missing: return "AuthMissing";
    case Errc::cache_corrupt: return "CacheCorrupt";
    case Errc::unknown_tag: return "UnknownTag";
    case Errc::empty_input: return "EmptyInput";
    case Errc::n_at_least_one: return "NAtLeastOne";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::empty_dataset: return "EmptyDataset";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::empty: return "Empty";
    case Errc::zero_clean_accuracy: return "ZeroCleanAccuracy";
    case Errc::mismatched_sweeps: return "MismatchedSweeps";
    case Errc::no_reports_found: return "NoReportsFound";
    case Errc::record_not_found: return "RecordNotFound";
    case Errc::run_id_collision: return "RunIdCollision";
    case Errc::bad_config: return "BadConfig";
    case Errc::bad_schema: return "BadSchema";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace textalign
