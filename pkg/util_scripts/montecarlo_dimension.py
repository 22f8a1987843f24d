#!/usr/bin/env python3
"""
One-off script comparing the expected dimension polynomial of G(n, p) with
Monte-Carlo means of the inductive dimension over sampled random graphs.
"""

import argparse
import logging
import os
import sys

from dotenv import load_dotenv

# Add src to path so we can import the library
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from classify import evaluate_expected_dimension, expected_dimension_polynomial, sample_mean_dimension
from errors import GraphInputError

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


DEFAULT_PROBABILITIES = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]


def compare(n: int, probabilities, samples: int, seed: int) -> None:
    """Print polynomial value, sample mean and standard error for each p."""
    poly = expected_dimension_polynomial(n - 1)
    print(f"d_{n}(p) = {poly.as_expr()}")
    print(f"{'p':>6} {'exact':>10} {'sampled':>10} {'stderr':>8} {'z':>7}")
    for p in probabilities:
        exact = evaluate_expected_dimension(n - 1, p)
        mean, stderr = sample_mean_dimension(n, p, samples, seed)
        z = (mean - exact) / stderr if stderr else 0.0
        print(f"{p:>6.2f} {exact:>10.5f} {mean:>10.5f} {stderr:>8.5f} {z:>7.2f}")
        if abs(z) > 4:
            logger.warning(f"p={p}: sample mean is {z:.1f} standard errors from the polynomial")


def main():
    parser = argparse.ArgumentParser(
        description="Compare expected inductive dimension with Monte-Carlo samples",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Graphs on 8 vertices, default grid of p
  python montecarlo_dimension.py 8

  # More samples at two probabilities
  python montecarlo_dimension.py 12 --samples 20000 -p 0.3 -p 0.7

The seed defaults to EVAKO_SEED (a .env file is read first).
        """
    )
    parser.add_argument("n", type=int, help="Number of vertices")
    parser.add_argument("-p", dest="probabilities", type=float, action="append", help="Edge probability (repeatable)")
    parser.add_argument("--samples", type=int, default=10000, help="Samples per probability (default: 10000)")
    parser.add_argument("--seed", type=int, help="PCG64 seed")
    args = parser.parse_args()

    load_dotenv()
    seed = args.seed if args.seed is not None else int(os.getenv("EVAKO_SEED", "0"))

    logger.info("=" * 60)
    logger.info("Expected Dimension - Monte-Carlo Comparison")
    logger.info("=" * 60)
    logger.info(f"n = {args.n}, samples = {args.samples}, seed = {seed}")
    logger.info("=" * 60)

    try:
        compare(args.n, args.probabilities or DEFAULT_PROBABILITIES, args.samples, seed)
    except (GraphInputError, ValueError) as e:
        logger.error(f"Script failed: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
