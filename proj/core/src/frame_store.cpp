// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// FrameStore is header-only (the mutator is a template); this translation
// unit just anchors the header's include graph.
#include "multiverse/frame_store.hpp"
