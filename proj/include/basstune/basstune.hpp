// include/basstune/basstune.hpp

// Copyright 2026 basstune contributors
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

#include "basstune/advisor.hpp"
#include "basstune/analysis.hpp"
#include "basstune/audio.hpp"
#include "basstune/common.hpp"
#include "basstune/corpus.hpp"
#include "basstune/fft.hpp"
#include "basstune/loudness.hpp"
#include "basstune/monitors.hpp"
#include "basstune/profile.hpp"
#include "basstune/runconfig.hpp"
#include "basstune/stft.hpp"
#include "basstune/voice.hpp"
#include "basstune/wav.hpp"
