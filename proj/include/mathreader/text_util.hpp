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

#ifndef MATHREADER_TEXT_UTIL_HPP
#define MATHREADER_TEXT_UTIL_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mathreader {

// Byte length of the UTF-8 sequence starting at s[pos]. Returns 1 for
// malformed leading/continuation bytes so scanning always makes progress.
std::size_t utf8_sequence_length(std::string_view s, std::size_t pos);

bool is_valid_utf8(std::string_view s);

// Decodes to code points; malformed bytes decode as U+FFFD one byte at a time.
std::vector<uint32_t> to_code_points(std::string_view s);

std::string ascii_lowercase(std::string_view s);

// Splits on ASCII whitespace, dropping empty tokens.
std::vector<std::string> split_words(std::string_view s);

std::string join_words(const std::vector<std::string>& words);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace mathreader

#endif  // MATHREADER_TEXT_UTIL_HPP
