"""
Command-line entry point: ``python -m scripts.cli <verb> [options]``.
"""

import argparse
import json
import sys
from typing import List, Optional

from scripts.automation.pipeline import ExperimentPipeline
from scripts.core.config import RunConfig
from scripts.core.errors import DQDError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scripts.cli", description="DQD 전하 큐비트 시뮬레이터")
    parser.add_argument("verb", choices=ExperimentPipeline.COMMANDS, help="실행할 실험")
    parser.add_argument("--config", type=str, default=None, help="RunConfig JSON 파일")
    parser.add_argument("--out", type=str, default=None, help="출력 디렉토리 (설정의 output_dir 대신)")
    parser.add_argument("--serial", action="store_true", help="단일 프로세스 결정적 실행")
    parser.add_argument("--workers", type=int, default=None, help="스윕/커널 작업자 수")
    parser.add_argument("--report", action="store_true", help="dashboard.html 과 experiment.xlsx 도 생성")
    parser.add_argument("--quiet", action="store_true", help="진행 표시 끄기")
    return parser


def error_line(code: str, message: str) -> str:
    """기계가 읽을 수 있는 한 줄 오류 메시지."""
    escaped = message.replace("\\", "\\\\").replace('"', '\\"').replace("\n", " ")
    return f'ERROR code={code} message="{escaped}"'


def main(argv: Optional[List[str]] = None) -> int:
    """
    Returns:
        int: 0 성공, 2 DQD 오류, 1 예기치 못한 오류
    """
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig.from_json(args.config) if args.config else RunConfig()
        changes = {}
        if args.serial:
            changes["serial"] = True
        if args.workers is not None:
            changes["workers"] = args.workers
        if changes:
            config = config.replace(**changes)
        pipeline = ExperimentPipeline(config, output_dir=args.out, report=args.report, show_progress=not args.quiet)
        summary = pipeline.run(args.verb, argv=sys.argv[1:] if argv is None else argv)
    except DQDError as exc:
        print(error_line(type(exc).__name__, exc.message), file=sys.stderr)
        return 2
    except Exception as exc:
        print(error_line("Unexpected", f"{type(exc).__name__}: {exc}"), file=sys.stderr)
        return 1
    print(f"OK command={args.verb} summary={json.dumps(summary, ensure_ascii=False, default=str)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
