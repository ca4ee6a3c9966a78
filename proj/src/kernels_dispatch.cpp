// Copyright 2026 The loccsim Authors.
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
#include "loccsim/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace loccsim::kernels {

bool avx2_available() {
#if defined(__x86_64__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {
const Ops* pick_default() {
    if (const char* env = std::getenv("LOCCSIM_KERNELS")) {
        const std::string name(env);
        if (name == "scalar") return &scalar_ops();
        if (name == "avx2") return &avx2_ops();
        throw std::runtime_error("unknown LOCCSIM_KERNELS value: " + name);
    }
    return avx2_available() ? &avx2_ops() : &scalar_ops();
}

const Ops*& active() {
    static const Ops* ops = pick_default();
    return ops;
}
}  // namespace

const Ops& backend() { return *active(); }

void set_backend(const std::string& name) {
    if (name == "scalar") {
        active() = &scalar_ops();
    } else if (name == "avx2") {
        active() = &avx2_ops();
    } else {
        throw std::runtime_error("unknown kernel backend: " + name);
    }
}

}  // namespace loccsim::kernels
