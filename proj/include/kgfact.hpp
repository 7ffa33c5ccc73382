// Copyright 2026 The kgfact Authors
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

#pragma once

#include "kgfact/claim_model.hpp"
#include "kgfact/common.hpp"
#include "kgfact/kg_store.hpp"
#include "kgfact/retriever.hpp"
#include "kgfact/synthesizer.hpp"
#include "kgfact/synthetic.hpp"
#include "kgfact/templates.hpp"
#include "kgfact/verifier.hpp"
