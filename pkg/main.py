"""
连续变量量子密钥分发密钥率计算工具 - 主程序
命令行入口，子命令见 cli.commands
"""

import sys

from cli.commands import dispatch


def main():
    """主函数"""
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
