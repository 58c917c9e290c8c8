/*
 * Copyright 2026 The KPT Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include "kpt/common.hpp"
#include "kpt/config.hpp"
#include "kpt/eval.hpp"
#include "kpt/kbstore.hpp"
#include "kpt/pipeline.hpp"
#include "kpt/refine.hpp"
#include "kpt/scorer.hpp"
#include "kpt/train.hpp"
#include "kpt/verbalizer.hpp"
