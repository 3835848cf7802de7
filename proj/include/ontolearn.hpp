#pragma once

#include "ontolearn/error.hpp"
#include "ontolearn/text.hpp"
#include "ontolearn/corpus.hpp"
#include "ontolearn/binio.hpp"
#include "ontolearn/embedstore.hpp"
#include "ontolearn/http.hpp"
#include "ontolearn/embed_fetch.hpp"
#include "ontolearn/fewshot.hpp"
#include "ontolearn/completion.hpp"
#include "ontolearn/zeroshot.hpp"
#include "ontolearn/eval.hpp"
#include "ontolearn/taxo.hpp"
#include "ontolearn/pipeline.hpp"
