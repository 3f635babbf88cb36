"""
DQD 실험 결과 Excel 워크북 생성 모듈입니다.
"""

import re
from pathlib import Path
from typing import Dict, Optional

import pandas as pd

from scripts.core.base import DQDBase

SHEET_NAME_LIMIT = 31


def sheet_name(name: str) -> str:
    """Excel 시트 이름 규칙(31자, []:*?/\\ 금지)에 맞춥니다."""
    return re.sub(r"[\[\]:*?/\\]", "_", name)[:SHEET_NAME_LIMIT] or "Sheet"


class ExperimentWorkbookReporter(DQDBase):
    """
    실행 결과 CSV 표들을 시트 하나씩 담은 워크북으로 저장하는 리포터 클래스입니다.
    """
    def __init__(self, config=None, output_dir=None):
        super().__init__(config, output_dir)
        self.logger.info("ExperimentWorkbookReporter 초기화 완료.")

    def create_report(self, tables: Dict[str, pd.DataFrame], summary: Optional[Dict[str, object]] = None,
                      filename: str = "experiment.xlsx") -> Optional[Path]:
        """
        표들을 Excel 파일로 저장합니다.

        Args:
            tables (Dict[str, pd.DataFrame]): 시트 이름 → 표
            summary (Dict, optional): '요약' 시트에 쓸 항목
            filename (str): 저장할 파일명 (output 디렉토리 기준)

        Returns:
            Optional[Path]: 저장된 파일의 경로 (성공 시), 실패 시 None
        """
        output_path = self.get_output_path(filename)
        try:
            with pd.ExcelWriter(output_path, engine="openpyxl") as writer:
                if summary:
                    pd.DataFrame({"항목": list(summary), "값": [str(v) for v in summary.values()]}).to_excel(
                        writer, sheet_name="요약", index=False
                    )
                for name, df in tables.items():
                    df.to_excel(writer, sheet_name=sheet_name(name), index=False)
                for worksheet in writer.book.worksheets:
                    worksheet.freeze_panes = "A2"
            self.logger.info(f"Excel 리포트 저장 완료: {output_path}")
            return output_path
        except Exception as e:
            self.logger.error(f"Excel 리포트 저장 중 오류 발생: {e}")
            return None
