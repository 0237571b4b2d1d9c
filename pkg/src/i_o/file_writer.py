from typing import *
import json
import sys

from system_elements.coalgebra import Coalgebra

"""
JSON emitters. Output is deterministic: keys keep their insertion order, blocks are sorted
by least state and states inside a block ascend.
"""


def dumps(doc: Any) -> str:
    return json.dumps(doc, ensure_ascii=False) + '\n'


def dump_coalgebra(coalg: Coalgebra) -> str:
    return dumps(coalg.to_json())


def write_output(text: str, path: Optional[str] = None) -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, 'w', encoding='utf-8') as writer:
            writer.write(text)
