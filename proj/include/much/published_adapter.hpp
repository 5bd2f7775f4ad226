#pragma once

// Translation from the released dataset's row layout into LabeledSample.
// Nothing outside this file knows about that layout.
//
// Expected row fields (aliases in brackets):
//   id [sample_id, uid]; lang [language]; model [model_name];
//   temperature; question [model_input];
//   generation [model_output_text, output_text];
//   tokens [model_output_tokens]: decoded token strings;
//   token_ids [model_output_token_ids]: sampled ids;
//   top_logits [logits]: per token, 24 values;
//   top_token_ids [logit_token_ids]: per token, 24 ids;
//   claims [segmentation] (optional): lists of token indices;
//   annotations (optional): {annotator: [labels]}, or labels_<annotator>.
// Token offsets are rebuilt by accumulating surface lengths. A trailing
// token that falls beyond the generation text and looks like an
// end-of-sequence marker becomes the EOS token.

#include <json.hpp>

#include "much/types.hpp"

namespace much::published {

LabeledSample from_json(const nlohmann::json& row);

bool looks_like_eos(std::string_view surface) noexcept;

}  // namespace much::published
