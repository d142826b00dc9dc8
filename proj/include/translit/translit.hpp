#pragma once

#include "translit/bpe.hpp"
#include "translit/char_encoding.hpp"
#include "translit/corpus.hpp"
#include "translit/derom_model.hpp"
#include "translit/error.hpp"
#include "translit/mapping_table.hpp"
#include "translit/metrics.hpp"
#include "translit/pipeline.hpp"
#include "translit/reversibility.hpp"
#include "translit/rng.hpp"
#include "translit/romanize.hpp"
#include "translit/unicode.hpp"
#include "translit/utf8.hpp"
#include "translit/vocab_transfer.hpp"
