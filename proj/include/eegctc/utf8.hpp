// eegctc/utf8.hpp

// Copyright 2026  The eegctc Authors

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

#ifndef EEGCTC_UTF8_HPP_
#define EEGCTC_UTF8_HPP_

#include <string>
#include <string_view>

namespace eegctc {

// Transcripts are UTF-8 on disk and code points in memory; one code point is
// one character everywhere (charsets, CER).
std::u32string utf8_decode(std::string_view text);
std::string utf8_encode(std::u32string_view code_points);
std::string utf8_encode(char32_t code_point);

}  // namespace eegctc

#endif  // EEGCTC_UTF8_HPP_
