#pragma once

#include "dbowsum/common.hpp"
#include "dbowsum/corpus.hpp"
#include "dbowsum/model.hpp"
#include "dbowsum/projection.hpp"
#include "dbowsum/rng.hpp"
#include "dbowsum/rouge.hpp"
#include "dbowsum/summarizer.hpp"
#include "dbowsum/text.hpp"
#include "dbowsum/vecmath.hpp"
#include "dbowsum/vocab.hpp"
