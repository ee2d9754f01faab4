""" Utility functions for handling arguments, seeds and command-line values."""
import argparse
import json
import os
import random
from collections import namedtuple
from typing import Tuple

import numpy as np


def save_args(args: argparse.Namespace, args_path: str = None):
    """Saves command line arguments to a json file.

    Args:
        args (argparse.Namespace): Arguments to be saved.
        args_path (str): Directory to write args.json to, defaults to args.output_dir.
    """
    if args_path is None:
        args_path = args.output_dir
    path = os.path.join(args_path, "args.json")
    values = {k: v for k, v in vars(args).items() if not callable(v)}
    with open(path, "w") as f:
        json.dump(values, f, indent=2, default=str)


def load_args(args_path: str) -> namedtuple:
    """Loads arguments saved by save_args.

    Args:
        args_path (str): Path of the args.json file.

    Returns:
        namedtuple: argparse.Namespace like object to store arguments.
    """
    with open(args_path) as f:
        args = json.load(f)

    args = namedtuple("Args", args.keys())(*args.values())
    return args


def set_seed(seed: int):
    random.seed(seed)
    np.random.seed(seed % 2**32)


def parse_tuple(text: str) -> Tuple[int, ...]:
    """Parses "1,0,2" (or "1 0 2") into a tuple of element codes; the empty string is the empty tuple."""
    text = text.replace(",", " ").strip()
    if not text:
        return ()
    try:
        return tuple(int(token) for token in text.split())
    except ValueError:
        raise ValueError(f"Expected comma separated integers, got {text!r}.")
