// Copyright 2026 The topicteach Authors.
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

#ifndef TOPICTEACH_TOPICTEACH_HPP
#define TOPICTEACH_TOPICTEACH_HPP

#include <topicteach/corpus_io.hpp>
#include <topicteach/errors.hpp>
#include <topicteach/estimators.hpp>
#include <topicteach/exact.hpp>
#include <topicteach/experiments.hpp>
#include <topicteach/learner_eval.hpp>
#include <topicteach/log_math.hpp>
#include <topicteach/model.hpp>
#include <topicteach/objective.hpp>
#include <topicteach/random.hpp>
#include <topicteach/teaching.hpp>

#endif  // TOPICTEACH_TOPICTEACH_HPP
