// Copyright 2026 The WOI Authors.
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

#ifndef WOI_BUNDLED_DATA_H_
#define WOI_BUNDLED_DATA_H_

#include <string_view>

// Raw text of the data files under core/data/, compiled into the library.
namespace woi::bundled {

std::string_view lexicon_text();
std::string_view feature_table_text();
std::string_view glove_fixture_text();

}  // namespace woi::bundled

#endif  // WOI_BUNDLED_DATA_H_
