/*
 * Copyright 2026 The shardcache Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "shardcache/codec.hpp"
#include "shardcache/combinatorics.hpp"
#include "shardcache/delivery.hpp"
#include "shardcache/error.hpp"
#include "shardcache/evaluate.hpp"
#include "shardcache/model.hpp"
#include "shardcache/partition.hpp"
#include "shardcache/placement.hpp"
#include "shardcache/rational.hpp"
#include "shardcache/scenario.hpp"
