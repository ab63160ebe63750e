#pragma once

#include "eagleeye/api.hpp"
#include "eagleeye/binomial.hpp"
#include "eagleeye/clustering.hpp"
#include "eagleeye/error.hpp"
#include "eagleeye/estimators.hpp"
#include "eagleeye/io.hpp"
#include "eagleeye/kdtree.hpp"
#include "eagleeye/neighbors.hpp"
#include "eagleeye/parallel.hpp"
#include "eagleeye/pipeline.hpp"
#include "eagleeye/report.hpp"
#include "eagleeye/scoring.hpp"
#include "eagleeye/synthetic.hpp"
#include "eagleeye/threshold.hpp"
#include "eagleeye/two_sample.hpp"
#include "eagleeye/types.hpp"
